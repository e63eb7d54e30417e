"""Grid oracle: first-order upwind method of lines for the (Q, r) equations.

Spin-diagonal blocks advect in r only (Q is a parameter), off-diagonal blocks
advect in both r and Q.  In canonical units the equations read

    d rho/d tau = -(r - h_t Q) d rho/dr - vQ d rho/dQ + source * rho

with ``vQ = 0`` on the diagonal, ``vQ = -2 s eps_t / h_t`` off it, and
``source = -d_t r^2 / (4 h_t^2)`` plus ``i s (eps_t/h_t) r`` (diagonal) or
``2 i s lam_t`` (off-diagonal).  Space is discretised by one-sided upwind
differences, time by Heun's two-stage method.  Ghost values beyond the grid
are zero, which only matters at inflow edges; domains must be padded so the
data there is negligible.

The scheme is first order.  Accuracy comes from refinement: the
``refined_*`` drivers run a nested sequence of grids at fixed Courant number
and combine them with a Romberg table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from ..analytic import initial_state_qr
from ..errors import CflViolation, DiagonalPairRejected, DomainTooSmall, NonNegativeTimeRequired
from ..params import Axis, DensitySlice, GridSpec, Params, Representation, Spin, SpinPair, as_groups

CFL_LIMIT = 0.9

# single-grid defaults for plain first-order runs
DEFAULT_R_AXIS = Axis(-12.0, 12.0, 1537)
DEFAULT_Q_AXIS = Axis(-8.0, 8.0, 1025)
# nested sequences for the refined drivers; the data at |r| = 10 is ~1e-11 of its peak
D_BASE_R_AXIS = Axis(-10.0, 10.0, 321)
D_LEVELS = 3
OD_BASE_Q_AXIS = Axis(-8.0, 8.0, 33)
OD_BASE_R_AXIS = Axis(-10.0, 10.0, 41)
OD_LEVELS = 5


@dataclass(frozen=True)
class UpwindConfig:
    """Time-step control and boundary check for the upwind solver.

    ``dtau`` overrides the step chosen from ``cfl``; ``boundary_tol`` bounds
    the initial data on the grid edges relative to its maximum.
    """

    cfl: float = 0.5
    dtau: float | None = None
    boundary_tol: float = 1e-6

    def __post_init__(self):
        if not 0 < self.cfl <= CFL_LIMIT:
            raise CflViolation(f"cfl={self.cfl} outside (0, {CFL_LIMIT}]")


@numba.njit(cache=True)
def _upwind_rhs(u, out, vr, vq, dr, dq, src):
    nq, nr = u.shape
    for i in range(nq):
        for j in range(nr):
            v = vr[i, j]
            if v > 0.0:
                left = u[i, j - 1] if j > 0 else 0j
                dudr = (u[i, j] - left) / dr
            else:
                right = u[i, j + 1] if j < nr - 1 else 0j
                dudr = (right - u[i, j]) / dr
            if vq > 0.0:
                lo = u[i - 1, j] if i > 0 else 0j
                dudq = (u[i, j] - lo) / dq
            elif vq < 0.0:
                hi = u[i + 1, j] if i < nq - 1 else 0j
                dudq = (hi - u[i, j]) / dq
            else:
                dudq = 0j
            out[i, j] = -v * dudr - vq * dudq + src[i, j] * u[i, j]


@numba.njit(cache=True)
def _heun(u, vr, vq, dr, dq, src, dt, steps):
    k1 = np.empty_like(u)
    k2 = np.empty_like(u)
    u1 = np.empty_like(u)
    nq, nr = u.shape
    for _ in range(steps):
        _upwind_rhs(u, k1, vr, vq, dr, dq, src)
        for i in range(nq):
            for j in range(nr):
                u1[i, j] = u[i, j] + dt * k1[i, j]
        _upwind_rhs(u1, k2, vr, vq, dr, dq, src)
        for i in range(nq):
            for j in range(nr):
                u[i, j] = 0.5 * (u[i, j] + u1[i, j] + dt * k2[i, j])
    return u


def _as_axis(grid) -> Axis:
    if isinstance(grid, Axis):
        return grid
    if isinstance(grid, tuple) and len(grid) == 3:
        return Axis(float(grid[0]), float(grid[1]), int(grid[2]))
    values = np.asarray(grid, dtype=float)
    if values.ndim == 0 or values.size == 1:
        v = float(values.reshape(-1)[0])
        return Axis(v, v, 1)
    axis = Axis(float(values[0]), float(values[-1]), values.size)
    if not np.allclose(values, axis.values(), rtol=0, atol=1e-12 * max(1.0, abs(axis.max - axis.min))):
        raise ValueError("upwind grids must be uniform")
    return axis


def _max_speed(r_axis: Axis, q_axis: Axis, h: float, vq: float):
    q_extent = max(abs(q_axis.min), abs(q_axis.max))
    r_extent = max(abs(r_axis.min), abs(r_axis.max))
    rate = (r_extent + h * q_extent) / r_axis.step
    if vq != 0.0:
        rate += abs(vq) / q_axis.step
    return rate


def courant_steps(tau_end, r_axis: Axis, q_axis: Axis, h: float, vq: float, config: UpwindConfig) -> int:
    rate = _max_speed(r_axis, q_axis, h, vq)
    if config.dtau is not None:
        steps = max(1, int(math.ceil(tau_end / config.dtau - 1e-12)))
    else:
        steps = max(1, int(math.ceil(tau_end * rate / config.cfl)))
    if tau_end > 0 and tau_end / steps * rate > CFL_LIMIT:
        raise CflViolation(f"Courant number {tau_end / steps * rate:.3f} exceeds {CFL_LIMIT}")
    return steps


def _solve(q_axis: Axis, r_axis: Axis, tau_end, config, params, *, vq, source_kind, sign, steps, label):
    if tau_end < 0:
        raise NonNegativeTimeRequired(tau_end)
    g = as_groups(params)
    h = g.h_t
    k = g.d_t / (4.0 * h * h)
    Q, R = np.meshgrid(q_axis.values(), r_axis.values(), indexing="ij")
    u = np.ascontiguousarray(initial_state_qr(Q, R, g), dtype=np.complex128)

    peak = np.abs(u).max()
    edges = [np.abs(u[:, 0]).max(), np.abs(u[:, -1]).max()]
    if vq != 0.0 and q_axis.count > 1:
        edges += [np.abs(u[0, :]).max(), np.abs(u[-1, :]).max()]
    if max(edges) > config.boundary_tol * peak:
        raise DomainTooSmall(f"initial data on the grid edge is {max(edges) / peak:.2e} of its peak")

    if source_kind == "diagonal":
        src = -k * R * R + 1j * sign * (g.eps_t / h) * R
    else:
        src = -k * R * R + 2j * sign * g.lam_t + 0.0 * R
    if steps is None:
        steps = courant_steps(tau_end, r_axis, q_axis, h, vq, config)
    elif tau_end > 0 and tau_end / steps * _max_speed(r_axis, q_axis, h, vq) > CFL_LIMIT:
        raise CflViolation(f"{steps} steps are too few for tau_end={tau_end}")
    if tau_end > 0:
        vr = np.ascontiguousarray(R - h * Q)
        dq = q_axis.step if q_axis.count > 1 else 1.0
        u = _heun(u, vr, float(vq), r_axis.step, dq, np.ascontiguousarray(src, dtype=np.complex128),
                  tau_end / steps, steps)
    grid = GridSpec(q_axis, r_axis, ("Q", "r"))
    return DensitySlice(Representation.QR, label, float(tau_end), grid, u, "pde-oracle", {"steps": steps})


def upwind_solve_d(Q, r_grid, tau_end, config: UpwindConfig, spin, params: Params, steps=None) -> DensitySlice:
    """Solve a spin-diagonal block on ``r_grid`` for one Q (or a uniform Q grid)."""
    pair = spin if isinstance(spin, SpinPair) else SpinPair(Spin(spin), Spin(spin))
    if not pair.diagonal:
        raise ValueError(f"{pair.label} is not a spin-diagonal block")
    return _solve(_as_axis(Q), _as_axis(r_grid), tau_end, config, params,
                  vq=0.0, source_kind="diagonal", sign=pair.sign, steps=steps, label=pair.label)


def upwind_solve_od(Q_grid, r_grid, tau_end, config: UpwindConfig, pair, params: Params, steps=None) -> DensitySlice:
    """Solve an off-diagonal block on the (Q, r) grid."""
    pair = SpinPair(*pair)
    if pair.diagonal:
        raise DiagonalPairRejected(pair.label)
    g = as_groups(params)
    vq = -2.0 * pair.sign * g.eps_t / g.h_t
    return _solve(_as_axis(Q_grid), _as_axis(r_grid), tau_end, config, g,
                  vq=vq, source_kind="offdiagonal", sign=pair.sign, steps=steps, label=pair.label)


def refine_axis(axis: Axis, level: int) -> Axis:
    if axis.count == 1:
        return axis
    return Axis(axis.min, axis.max, (axis.count - 1) * 2**level + 1)


@dataclass(frozen=True)
class RefinedSolution:
    """Nested-grid upwind runs and their Romberg combination.

    ``levels[j]`` is the plain first-order solution on grid level j (spacing
    halved each level), ``restricted[j]`` its values on the base-grid nodes,
    and ``extrapolated`` the top entry of the Romberg table on the base grid.
    """

    levels: list
    restricted: list
    extrapolated: DensitySlice


def romberg(values: list) -> np.ndarray:
    """Eliminate the h, h^2, ... error terms of a halving sequence (coarsest first)."""
    row = [np.asarray(v) for v in values]
    order = 1
    while len(row) > 1:
        f = 2.0**order
        row = [(f * row[j + 1] - row[j]) / (f - 1.0) for j in range(len(row) - 1)]
        order += 1
    return row[0]


def _refined(solver, q_axis, r_axis, tau_end, levels, config, params, pair, vq):
    g = as_groups(params)
    base_steps = courant_steps(tau_end, r_axis, q_axis, g.h_t, vq, config)
    runs, restricted = [], []
    for j in range(levels):
        qa, ra = refine_axis(q_axis, j), refine_axis(r_axis, j)
        sl = solver(qa, ra, tau_end, config, pair, g, steps=base_steps * 2**j)
        runs.append(sl)
        stride_q = 2**j if q_axis.count > 1 else 1
        restricted.append(sl.values[::stride_q, :: 2**j])
    best = romberg(restricted)
    grid = GridSpec(q_axis, r_axis, ("Q", "r"))
    meta = {"levels": levels, "base_steps": base_steps}
    return RefinedSolution(runs, restricted, DensitySlice(Representation.QR, pair.label, float(tau_end), grid, best,
                                                          "pde-oracle", meta))


def refined_solve_d(Q, tau_end, spin, params: Params, r_axis: Axis = D_BASE_R_AXIS, levels: int = D_LEVELS,
                    config: UpwindConfig = UpwindConfig()) -> RefinedSolution:
    pair = spin if isinstance(spin, SpinPair) else SpinPair(Spin(spin), Spin(spin))
    return _refined(upwind_solve_d, _as_axis(Q), _as_axis(r_axis), tau_end, levels, config, params, pair, 0.0)


def refined_solve_od(tau_end, pair, params: Params, q_axis: Axis = OD_BASE_Q_AXIS, r_axis: Axis = OD_BASE_R_AXIS,
                     levels: int = OD_LEVELS, config: UpwindConfig = UpwindConfig()) -> RefinedSolution:
    pair = SpinPair(*pair)
    g = as_groups(params)
    vq = -2.0 * pair.sign * g.eps_t / g.h_t
    return _refined(upwind_solve_od, _as_axis(q_axis), _as_axis(r_axis), tau_end, levels, config, g, pair, vq)
