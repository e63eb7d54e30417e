"""Command-line entry point.

Exit codes: 0 success, 1 validation failure, 2 domain or I/O error
(for example no decoherence), 3 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, analytic, observables
from .config import KEYS, RunConfig, build_config, read_pairs
from .errors import InvalidValue, NoDecoherence, ParseError, SternGerlachError, UnnormalizedSpinState
from .params import FIG1_GROUPS, UP_DOWN, Axis, DensitySlice, GridSpec, Representation, SpinState
from .slicefile import FMT, serialize
from .validation import run_validation

EXIT_OK, EXIT_FAIL, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2, 3

FIG1_TAUS = (0.0, 1.0, 3.0)
FIG1_AXIS = Axis(-4.0, 4.0, 201)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key=value config file; flags below override it")
    for key in KEYS:
        p.add_argument(f"--{key}", dest="cfg:" + key, metavar="VALUE")


def _load_config(args) -> RunConfig:
    raw = {}
    if args.config:
        raw = read_pairs(Path(args.config).read_text(encoding="utf-8"))
    for key in KEYS:
        value = getattr(args, "cfg:" + key)
        if value is not None:
            raw[key] = value
    return build_config(raw)


def _write(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _out_for(out: str, tau: float, many: bool) -> str:
    """Per-tau file name when several times go to one path: slice.csv -> slice_tau1.5.csv."""
    if out == "-" or not many:
        return out
    p = Path(out)
    return str(p.with_name(f"{p.stem}_tau{tau:g}{p.suffix}"))


# ---------------------------------------------------------------- verbs


def cmd_timescales(cfg: RunConfig, qs) -> tuple[int, str]:
    g = cfg.groups
    lines, code = [], EXIT_OK
    lines.append(f"c3 = {analytic.envelope_coefficient(g):.6g}")
    try:
        lines.append(f"tau_spin = {analytic.tau_spin(g):.6g}")
    except NoDecoherence:
        lines.append("tau_spin: no spin decoherence (eps_t = 0 or d_t = 0)")
        code = EXIT_DOMAIN
    for Q in qs:
        try:
            lines.append(f"tau_momentum(Q={Q:g}) = {analytic.tau_momentum(Q, g):.6g}"
                         f"  (asymptotic decay rate {analytic.momentum_decay_rate(Q, g):.6g})")
        except NoDecoherence:
            lines.append(f"tau_momentum(Q={Q:g}): no momentum decoherence (Q = 0 or d_t = 0)")
            code = EXIT_DOMAIN
    return code, "\n".join(lines) + "\n"


def cmd_evaluate(cfg: RunConfig) -> list[tuple[str, str]]:
    """One serialized composite slice per tau, paired with its destination."""
    many = len(cfg.taus) > 1
    out = []
    for tau in cfg.taus:
        sl = observables.scan_density(cfg.rep, cfg.grid, tau, cfg.state, cfg.groups)
        out.append((_out_for(cfg.out, tau, many), serialize(sl, cfg.format, cfg.groups, __version__)))
    return out


def fig1_groups(tau: float):
    """Caption values, with the field off in the tau = 0 panel."""
    return FIG1_GROUPS.replace(eps_t=0.0) if tau == 0 else FIG1_GROUPS


def fig1_slice(tau: float, axis: Axis = FIG1_AXIS) -> DensitySlice:
    """Re(rho_upup + rho_downdown) on the (u, v) momentum plane.

    The two blocks are added unweighted and each carries the raw 2 pi
    normalisation of the momentum transform, so the peak height at tau = 0
    is 2 * 2 pi * (Gaussian density).
    """
    grid = GridSpec(axis, axis, ("u", "v"))
    half = SpinState(math.sqrt(0.5), math.sqrt(0.5))
    composite = observables.scan_density(Representation.MOMENTUM, grid, tau, half, fig1_groups(tau))
    return DensitySlice(Representation.MOMENTUM, "up-up+down-down", float(tau), grid,
                        2.0 * np.real(composite.values), "analytic", {"normalization": "raw-2pi"})


def cmd_fig1(tau: float, fmt: str) -> str:
    if tau not in FIG1_TAUS:
        raise UsageError(f"fig1 panels exist for tau in {FIG1_TAUS}")
    return serialize(fig1_slice(tau), fmt, fig1_groups(tau), __version__)


def cmd_validate(level: str) -> tuple[int, dict]:
    report = run_validation(level, FIG1_GROUPS)
    return (EXIT_OK if report.passed else EXIT_FAIL), report.to_dict(__version__)


def trajectory_rows(observable: str, tau_max: float, steps: int, cfg: RunConfig, rep=Representation.MOMENTUM):
    if steps < 2:
        raise UsageError("steps must be >= 2")
    if not tau_max > 0:
        raise UsageError("tau_max must be > 0")
    g = cfg.groups
    if observable == "centers":
        header = ["tau", "up_center", "down_center", "separation", "width"]
        rows = []
        for t in np.linspace(0.0, tau_max, steps):
            r = observables.peak_centers(rep, t, g)
            rows.append([r.tau, r.up_center, r.down_center, r.separation, r.width])
    elif observable == "widths":
        header = ["tau", "w1", "w2", "ratio"]
        rows = []
        for t in np.linspace(tau_max / steps, tau_max, steps):
            r = observables.widths(t, g)
            rows.append([r.tau, r.w1, r.w2, r.ratio])
    elif observable == "envelope":
        c3 = analytic.envelope_coefficient(g)
        analytic.tau_spin(g)  # NoDecoherence when there is nothing to fit
        header = ["tau", "neg_log_modulus", "c3_tau3"]
        taus = np.linspace(0.0, tau_max, steps)
        y = -np.real(analytic.log_rho_od_qr(0.0, 0.0, taus, UP_DOWN, g))
        rows = [[t, v, c3 * t**3] for t, v in zip(taus, y)]
    else:
        raise UsageError(f"unknown observable {observable!r}")
    return header, rows


def cmd_trajectory(observable, tau_max, steps, cfg: RunConfig, rep=Representation.MOMENTUM) -> str:
    header, rows = trajectory_rows(observable, tau_max, steps, cfg, rep)
    lines = [f"# version={__version__}", f"# observable={observable}", f"# representation={Representation(rep).value}"]
    lines += [f"# {k}={FMT % getattr(cfg.groups, k)}" for k in ("eps_t", "d_t", "h_t", "p_t", "lam_t")]
    lines.append(",".join(header))
    lines += [",".join(FMT % x for x in row) for row in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sterngerlach", description="Decoherence in a Stern-Gerlach pointer: closed forms and checks.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("timescales", help="print tau_spin, tau_momentum and c3")
    _add_config_flags(p)
    p.add_argument("--Q", default="1", help="comma-separated Q values (units of 1/sigma)")

    p = sub.add_parser("evaluate", help="sample the composite density on a grid")
    _add_config_flags(p)

    p = sub.add_parser("fig1", help="export one panel of Figure 1")
    p.add_argument("--tau", type=float, required=True, choices=FIG1_TAUS)
    p.add_argument("--out", default="-")
    p.add_argument("--format", default="csv", choices=("csv", "json"))

    p = sub.add_parser("validate", help="run the self-check suite")
    p.add_argument("--level", default="fast", choices=("fast", "full"))
    p.add_argument("--out", default="-")

    p = sub.add_parser("trajectory", help="time series of centres, widths or the envelope")
    _add_config_flags(p)
    p.add_argument("--observable", required=True, choices=("centers", "widths", "envelope"))
    p.add_argument("--tau-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--observable-rep", default="momentum", choices=("momentum", "position"))
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse exits on --help, --version and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.verb == "timescales":
            qs = [float(q) for q in args.Q.split(",") if q.strip()]
            code, text = cmd_timescales(_load_config(args), qs)
            sys.stdout.write(text)
            return code
        if args.verb == "evaluate":
            for path, text in cmd_evaluate(_load_config(args)):
                _write(text, path)
            return EXIT_OK
        if args.verb == "fig1":
            _write(cmd_fig1(args.tau, args.format), args.out)
            return EXIT_OK
        if args.verb == "validate":
            code, doc = cmd_validate(args.level)
            for row in doc.get("tables", {}).get("richardson", []):
                ratio = "" if row[2] is None else f"{row[2]:.4f}"
                print(f"richardson n={row[0]} err={row[1]:.6e} ratio={ratio}", file=sys.stderr)
            _write(json.dumps(doc, indent=1) + "\n", args.out)
            return code
        if args.verb == "trajectory":
            cfg = _load_config(args)
            _write(cmd_trajectory(args.observable, args.tau_max, args.steps, cfg, args.observable_rep), cfg.out)
            return EXIT_OK
    except (ParseError, InvalidValue, UnnormalizedSpinState, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SternGerlachError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
