"""Run configuration: ``key=value`` files and command-line overrides.

Recognised keys::

    eps_t d_t h_t p_t lam_t          dimensionless groups
    a_re a_im b_re b_im              spin amplitudes of a|up> + b|down>
    rep                              qr | momentum | position
    grid.axis1 grid.axis2            "min,max,count"
    grid.labels                      "Q,r", "Q,q", "R,r" or "u,v" (momentum only)
    tau                              comma-separated list of scaled times
    out                              output path, "-" for stdout
    format                           csv | json

Missing keys take the Figure 1 values, an equal superposition and a
[-4, 4]^2 momentum grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidValue, NonFiniteParameter, NonPositiveParameter, ParseError, UnnormalizedSpinState
from .params import AXIS_LABELS, FIG1_GROUPS, DimensionlessGroups, GridSpec, Representation, SpinState

GROUP_KEYS = ("eps_t", "d_t", "h_t", "p_t", "lam_t")
STATE_KEYS = ("a_re", "a_im", "b_re", "b_im")
GRID_KEYS = ("grid.axis1", "grid.axis2", "grid.labels")
KEYS = GROUP_KEYS + STATE_KEYS + ("rep",) + GRID_KEYS + ("tau", "out", "format")
FORMATS = ("csv", "json")
NORM_TOL = 1e-9

DEFAULTS = {
    "eps_t": repr(FIG1_GROUPS.eps_t),
    "d_t": repr(FIG1_GROUPS.d_t),
    "h_t": repr(FIG1_GROUPS.h_t),
    "p_t": repr(FIG1_GROUPS.p_t),
    "lam_t": repr(FIG1_GROUPS.lam_t),
    "a_re": repr(math.sqrt(0.5)),
    "a_im": "0",
    "b_re": repr(math.sqrt(0.5)),
    "b_im": "0",
    "rep": "momentum",
    "grid.axis1": "-4,4,201",
    "grid.axis2": "-4,4,201",
    "tau": "1",
    "out": "-",
    "format": "csv",
}


@dataclass(frozen=True)
class RunConfig:
    groups: DimensionlessGroups
    state: SpinState
    rep: Representation
    grid: GridSpec
    taus: tuple[float, ...]
    out: str
    format: str


def read_pairs(text: str) -> dict[str, str]:
    """Split config text into raw ``{key: value}``; no value checking yet."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value, got {line!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, key)
        if key in raw:
            raise ParseError(f"duplicate key {key!r}", lineno, key)
        raw[key] = value
    return raw


def _float(key: str, value: str) -> float:
    try:
        x = float(value)
    except ValueError:
        raise InvalidValue(key, f"not a number: {value!r}") from None
    if not math.isfinite(x):
        raise InvalidValue(key, "must be finite")
    return x


def _axis(key: str, value: str):
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != 3:
        raise InvalidValue(key, "expected min,max,count")
    try:
        count = int(parts[2])
    except ValueError:
        raise InvalidValue(key, f"count is not an integer: {parts[2]!r}") from None
    return (_float(key, parts[0]), _float(key, parts[1]), count)


def build_config(raw: dict[str, str]) -> RunConfig:
    """Validate raw values (file merged with overrides) into a :class:`RunConfig`."""
    for key in raw:
        if key not in KEYS:
            raise ParseError(f"unknown key {key!r}", key=key)
    v = {**DEFAULTS, **raw}

    values = {k: _float(k, v[k]) for k in GROUP_KEYS}
    try:
        groups = DimensionlessGroups(**values)
    except (NonPositiveParameter, NonFiniteParameter) as exc:
        raise InvalidValue(exc.name, str(exc)) from None

    a = complex(_float("a_re", v["a_re"]), _float("a_im", v["a_im"]))
    b = complex(_float("b_re", v["b_re"]), _float("b_im", v["b_im"]))
    norm = abs(a) ** 2 + abs(b) ** 2
    if abs(norm - 1.0) > NORM_TOL:
        raise UnnormalizedSpinState(f"|a|^2 + |b|^2 = {norm!r}, expected 1 within {NORM_TOL}")
    scale = math.sqrt(norm)
    state = SpinState(a / scale, b / scale)

    try:
        rep = Representation(v["rep"])
    except ValueError:
        raise InvalidValue("rep", f"expected one of {[r.value for r in Representation]}") from None

    if "grid.labels" in v:
        labels = tuple(p.strip() for p in v["grid.labels"].split(","))
        allowed = {AXIS_LABELS[rep]} | ({("u", "v")} if rep is Representation.MOMENTUM else set())
        if labels not in allowed:
            raise InvalidValue("grid.labels", f"{','.join(labels)} does not fit representation {rep.value}")
    else:
        labels = AXIS_LABELS[rep]
    grid = GridSpec(_axis("grid.axis1", v["grid.axis1"]), _axis("grid.axis2", v["grid.axis2"]), labels)

    taus = tuple(_float("tau", t) for t in v["tau"].split(",") if t.strip())
    if not taus:
        raise InvalidValue("tau", "empty list")
    if any(t < 0 for t in taus):
        raise InvalidValue("tau", "scaled times must be >= 0")

    fmt = v["format"]
    if fmt not in FORMATS:
        raise InvalidValue("format", f"expected one of {FORMATS}")
    return RunConfig(groups, state, rep, grid, taus, v["out"], fmt)


def parse_config(text: str, overrides: dict[str, str] | None = None) -> RunConfig:
    """Parse config text; ``overrides`` (e.g. from CLI flags) win over the file."""
    raw = read_pairs(text)
    raw.update(overrides or {})
    return build_config(raw)
