"""CSV and JSON export of :class:`DensitySlice` objects.

CSV layout::

    # key=value            metadata, one per line
    axis1,axis2,re,im
    <rows in grid order, axis2 fastest>

Numbers are written with 17 significant digits (``%.17g``) so that a
write-read cycle restores every float bit for bit.
"""

from __future__ import annotations

import io
import json

import numpy as np

from .errors import ParseError
from .params import Axis, DensitySlice, DimensionlessGroups, GridSpec, Representation

HEADER = "axis1,axis2,re,im"
FMT = "%.17g"


def _g(x: float) -> str:
    return FMT % x


def _axis_text(ax: Axis) -> str:
    return f"{_g(ax.min)},{_g(ax.max)},{ax.count}"


def slice_metadata(sl: DensitySlice, groups: DimensionlessGroups | None, version: str) -> dict[str, str]:
    meta = {
        "version": version,
        "representation": sl.representation.value,
        "block": sl.block,
        "tau": _g(sl.tau),
        "provenance": sl.provenance,
        "axis1": _axis_text(sl.grid.axis1),
        "axis2": _axis_text(sl.grid.axis2),
        "labels": ",".join(sl.grid.labels),
    }
    if groups is not None:
        for key in ("eps_t", "d_t", "h_t", "p_t", "lam_t"):
            meta[key] = _g(getattr(groups, key))
    for key, value in sl.meta.items():
        meta[f"meta.{key}"] = str(value)
    return meta


def _rows(sl: DensitySlice):
    a1, a2 = sl.axes()
    for i, x in enumerate(a1):
        for j, y in enumerate(a2):
            v = sl.values[i, j]
            yield x, y, v.real, v.imag


def to_csv(sl: DensitySlice, groups: DimensionlessGroups | None = None, version: str = "") -> str:
    buf = io.StringIO(newline="")
    for key, value in slice_metadata(sl, groups, version).items():
        buf.write(f"# {key}={value}\n")
    buf.write(HEADER + "\n")
    for row in _rows(sl):
        buf.write(",".join(_g(x) for x in row) + "\n")
    return buf.getvalue()


def to_json(sl: DensitySlice, groups: DimensionlessGroups | None = None, version: str = "") -> str:
    doc = {
        "metadata": slice_metadata(sl, groups, version),
        "columns": HEADER.split(","),
        "rows": [[float(x) for x in row] for row in _rows(sl)],
    }
    # repr of a Python float is the shortest exact round-trip form
    return json.dumps(doc, indent=1) + "\n"


def _parse_axis(text: str) -> Axis:
    lo, hi, n = text.split(",")
    return Axis(float(lo), float(hi), int(n))


def _build(meta: dict[str, str], rows: np.ndarray) -> tuple[DensitySlice, DimensionlessGroups | None]:
    try:
        grid = GridSpec(_parse_axis(meta["axis1"]), _parse_axis(meta["axis2"]), tuple(meta["labels"].split(",")))
        rep = Representation(meta["representation"])
        tau = float(meta["tau"])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad slice metadata: {exc}") from None
    if rows.shape != (grid.shape[0] * grid.shape[1], 4):
        raise ParseError(f"expected {grid.shape[0] * grid.shape[1]} rows of 4 columns, got {rows.shape}")
    x1, x2 = grid.mesh()
    if not (np.array_equal(rows[:, 0], x1.ravel()) and np.array_equal(rows[:, 1], x2.ravel())):
        raise ParseError("row coordinates do not match the grid metadata")
    values = (rows[:, 2] + 1j * rows[:, 3]).reshape(grid.shape)
    extra = {k[5:]: v for k, v in meta.items() if k.startswith("meta.")}
    groups = None
    if "eps_t" in meta:
        groups = DimensionlessGroups(*(float(meta[k]) for k in ("eps_t", "d_t", "h_t", "p_t", "lam_t")))
    sl = DensitySlice(rep, meta["block"], tau, grid, values, meta.get("provenance", "analytic"), extra)
    return sl, groups


def read_csv(text: str) -> tuple[DensitySlice, DimensionlessGroups | None]:
    meta: dict[str, str] = {}
    lines = text.split("\n")
    k = 0
    while k < len(lines) and lines[k].startswith("#"):
        key, _, value = lines[k][1:].strip().partition("=")
        meta[key] = value
        k += 1
    if k >= len(lines) or lines[k] != HEADER:
        raise ParseError(f"expected header {HEADER!r}", k + 1)
    body = [ln for ln in lines[k + 1:] if ln]
    try:
        rows = np.array([[float(x) for x in ln.split(",")] for ln in body], dtype=float).reshape(-1, 4)
    except ValueError as exc:
        raise ParseError(f"bad data row: {exc}") from None
    return _build(meta, rows)


def read_json(text: str) -> tuple[DensitySlice, DimensionlessGroups | None]:
    try:
        doc = json.loads(text)
        rows = np.array(doc["rows"], dtype=float).reshape(-1, 4)
        meta = doc["metadata"]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"bad slice JSON: {exc}") from None
    return _build(meta, rows)


def serialize(sl: DensitySlice, fmt: str = "csv", groups=None, version: str = "") -> str:
    return to_csv(sl, groups, version) if fmt == "csv" else to_json(sl, groups, version)


def parse(text: str, fmt: str = "csv"):
    return read_csv(text) if fmt == "csv" else read_json(text)
