"""Pointwise oracle: integrate the evolution equations along characteristics.

For a query point (Q, r, tau) the characteristic through it is followed
backwards to tau = 0 with an adaptive Runge-Kutta integrator while the
source term is accumulated in the same sweep.  The block value is then the
initial pure state at the foot of the characteristic times ``exp`` of the
accumulated source.  Nothing here consults the closed forms; the only shared
piece is the initial state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from ..analytic import initial_state_qr
from ..errors import DiagonalPairRejected, NonNegativeTimeRequired, QuadratureNotConverged
from ..params import Params, Spin, SpinPair, as_groups

RTOL = 1e-12
ATOL = 1e-14
PATH_SAMPLES = 65


@dataclass(frozen=True)
class CharacteristicPath:
    """A traced characteristic ending at ``terminal`` = (Q, r, tau).

    ``s`` runs over [0, tau]; ``invariants`` maps a name to its value at each
    sample (``I1`` for the diagonal equation, ``I1`` and ``I2`` for the
    off-diagonal one).
    """

    terminal: tuple[float, float, float]
    s: np.ndarray
    Q: np.ndarray
    r: np.ndarray
    invariants: dict
    log_source: complex

    def drift(self, name: str = "I1") -> float:
        """Spread of an invariant along the path relative to the path's scale, max(|r|, |Q|, 1)."""
        scale = max(1.0, float(np.abs(self.r).max()), float(np.abs(self.Q).max()))
        return float(np.ptp(self.invariants[name])) / scale

    @property
    def foot(self) -> tuple[float, float]:
        return float(self.Q[0]), float(self.r[0])


def _trace(Q, r, tau, params, *, q_velocity, phase_sign, samples=PATH_SAMPLES):
    """Integrate backwards from s = tau; state = (r, Q, Re S, Im S).

    In the look-back time u = tau - s the characteristic obeys
    dr/du = -(r - h Q) and dQ/du = -q_velocity.
    """
    if tau < 0:
        raise NonNegativeTimeRequired(tau)
    g = as_groups(params)
    h = g.h_t
    k = g.d_t / (4.0 * h * h)
    drift = phase_sign * g.eps_t / h

    def rhs(u, y):
        rr, qq = y[0], y[1]
        return [-(rr - h * qq), -q_velocity, -k * rr * rr, drift * rr]

    y0 = [float(r), float(Q), 0.0, 0.0]
    u_eval = np.linspace(0.0, tau, samples)
    if tau == 0:
        y = np.array(y0, dtype=float)[:, None].repeat(samples, axis=1)
    else:
        sol = solve_ivp(rhs, (0.0, tau), y0, method="DOP853", rtol=RTOL, atol=ATOL, t_eval=u_eval)
        if not sol.success:
            raise QuadratureNotConverged(sol.message)
        y = sol.y
    # reorder to forward time s = tau - u
    s = tau - u_eval[::-1]
    return s, y[1, ::-1], y[0, ::-1], complex(y[2, -1], y[3, -1])


def trace_characteristic_d(Q, r, tau, params: Params, spin=Spin.UP) -> CharacteristicPath:
    """Characteristic of a spin-diagonal block: dr/ds = r - h_t Q, Q fixed."""
    g = as_groups(params)
    s_sign = int(Spin(spin)) if not isinstance(spin, SpinPair) else spin.sign
    s, qs, rs, log_source = _trace(Q, r, tau, g, q_velocity=0.0, phase_sign=s_sign)
    i1 = (rs - g.h_t * qs) * np.exp(-s)
    return CharacteristicPath((float(Q), float(r), float(tau)), s, qs, rs, {"I1": i1}, log_source)


def trace_characteristic_od(Q, r, tau, pair, params: Params) -> CharacteristicPath:
    """Characteristic of an off-diagonal block: Q also moves, dQ/ds = -2 s eps_t/h_t."""
    pair = SpinPair(*pair)
    if pair.diagonal:
        raise DiagonalPairRejected(pair.label)
    g = as_groups(params)
    sgn = pair.sign
    q_velocity = -2.0 * sgn * g.eps_t / g.h_t
    s, qs, rs, log_source = _trace(Q, r, tau, g, q_velocity=q_velocity, phase_sign=0)
    i1 = g.h_t * qs + 2.0 * sgn * g.eps_t * s
    i2 = (rs - g.h_t * qs + 2.0 * sgn * g.eps_t) * np.exp(-s)
    return CharacteristicPath((float(Q), float(r), float(tau)), s, qs, rs, {"I1": i1, "I2": i2}, log_source)


def closed_form_path_d(s, Q, r, tau, params: Params):
    """Exact diagonal characteristic r(s) = rQ + (r - rQ) e^{-(tau - s)}; cross-check only."""
    rq = as_groups(params).h_t * Q
    return rq + (r - rq) * np.exp(-(tau - np.asarray(s)))


def oracle_rho_d(Q, r, tau, spin, params: Params) -> complex:
    path = trace_characteristic_d(Q, r, tau, params, spin)
    q0, r0 = path.foot
    return complex(initial_state_qr(q0, r0, params) * np.exp(path.log_source))


def oracle_rho_od(Q, r, tau, pair, params: Params) -> complex:
    pair = SpinPair(*pair)
    path = trace_characteristic_od(Q, r, tau, pair, params)
    q0, r0 = path.foot
    phase = 2.0 * pair.sign * as_groups(params).lam_t * tau
    return complex(initial_state_qr(q0, r0, params) * np.exp(path.log_source + 1j * phase))


def oracle_log_rho(Q, r, tau, pair, params: Params) -> complex:
    """log of the oracle value, usable where the value itself underflows."""
    pair = SpinPair(*pair)
    g = as_groups(params)
    if pair.diagonal:
        path = trace_characteristic_d(Q, r, tau, g, pair)
        phase = 0.0
    else:
        path = trace_characteristic_od(Q, r, tau, pair, g)
        phase = 2.0 * pair.sign * g.lam_t * tau
    q0, r0 = path.foot
    initial = 1j * g.p_t * r0 - r0 * r0 / 4.0 - q0 * q0 / 4.0
    return initial + path.log_source + 1j * phase
