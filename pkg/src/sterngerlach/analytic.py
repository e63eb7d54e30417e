"""Closed-form density-matrix blocks and the quantities derived from them.

All coordinates are canonical (see :mod:`sterngerlach.params`).  Conventions:

* (Q, r) representation: ``rho(Q, r) = int exp(i Q R) rho(R, r) dR`` with
  ``R = (x + y)/2`` and ``r = x - y``.
* momentum representation: ``rho(Q, q) = int exp(-i q r) rho(Q, r) dr``.  The
  sign is chosen so the initial packet is centred at ``q = +pbar``; along
  ``Q = 0`` each diagonal block integrates to ``2 pi`` (raw normalisation).
* position representation: ``rho(R, r) = (1/2pi) int exp(-i Q R) rho(Q, r) dQ``.

In these conventions the up block drifts towards ``+eps_t/h_t`` in momentum
and the up-down coherence carries the phase ``exp(+2i lam_t tau)``.

Each block is ``exp(P)`` with ``P`` quadratic in the two coordinates; the
(Q, r) exponents follow from integrating the first-order evolution equations
along their characteristics, and the other representations from exact
Gaussian transforms of those exponents.
"""

from __future__ import annotations

import math

import numpy as np

from ._gauss import Quadratic
from .errors import DiagonalPairRejected, NoDecoherence, NonNegativeTimeRequired
from .params import (
    DOWN_DOWN,
    DOWN_UP,
    UP_DOWN,
    UP_UP,
    Params,
    Representation,
    Spin,
    SpinPair,
    SpinState,
    as_groups,
)


def _check_tau(tau):
    t = np.asarray(tau, dtype=float)
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise NonNegativeTimeRequired(tau)
    return tau


def _diagonal_pair(spin) -> SpinPair:
    if isinstance(spin, SpinPair):
        if not spin.diagonal:
            raise ValueError(f"{spin.label} is not a spin-diagonal block")
        return spin
    return UP_UP if Spin(spin) == Spin.UP else DOWN_DOWN


def _offdiagonal_pair(pair) -> SpinPair:
    pair = SpinPair(*pair)
    if pair.diagonal:
        raise DiagonalPairRejected(f"{pair.label} is a spin-diagonal block")
    return pair


def initial_state_qr(Q, r, params: Params):
    """Partial transform of the initial pure state: exp(i p r - r^2/4 - Q^2/4)."""
    p = as_groups(params).p_t
    Q = np.asarray(Q)
    r = np.asarray(r)
    return np.exp(1j * p * r - r * r / 4.0 - Q * Q / 4.0)


def _initial_exponent(Q0, r0, p):
    return 1j * p * r0 - r0 * r0 / 4.0 - Q0 * Q0 / 4.0


def diagonal_exponent(tau, spin, params: Params) -> Quadratic:
    """Exponent of a spin-diagonal block as a quadratic in (Q, r).

    Characteristics run along ``dr/ds = r - h_t Q`` with ``Q`` fixed, so the
    point (Q, r) at time tau comes from the foot
    ``r0 = rQ + (r - rQ) e^{-tau}``, ``rQ = h_t Q``.  Along the way the block
    picks up ``-d_t r^2/(4 h_t^2) + i s (eps_t/h_t) r`` per unit time.
    """
    _check_tau(tau)
    g = as_groups(params)
    s = _diagonal_pair(spin).sign
    k = g.d_t / (4.0 * g.h_t**2)
    drift = g.eps_t / g.h_t
    e1 = np.exp(-np.asarray(tau, dtype=float))
    e2 = e1 * e1

    Q, r = Quadratic.x(), Quadratic.y()
    rq = g.h_t * Q
    delta = r - rq
    r0 = rq + e1 * delta
    path_r = tau * rq + (1.0 - e1) * delta
    path_r2 = tau * (rq * rq) + 2.0 * (1.0 - e1) * (rq * delta) + 0.5 * (1.0 - e2) * (delta * delta)
    return _initial_exponent(Q, r0, g.p_t) - k * path_r2 + 1j * s * drift * path_r


def offdiagonal_exponent(tau, pair, params: Params) -> Quadratic:
    """Exponent of a spin-off-diagonal block as a quadratic in (Q, r).

    Here Q is transported too: ``dQ/ds = -2 s eps_t / h_t`` (s = +1 for
    up-down), and the characteristic through (Q, r) at time tau is
    ``r(u) = a + b u + (r - a) e^{-u}`` in the look-back time ``u = tau - s'``,
    with ``b = 2 s eps_t`` and ``a = h_t Q - b``.  The b^2 u^2 piece of
    ``r(u)^2`` integrates to the cubic decay ``d_t eps_t^2 tau^3 / (3 h_t^2)``.
    """
    _check_tau(tau)
    g = as_groups(params)
    sgn = _offdiagonal_pair(pair).sign
    k = g.d_t / (4.0 * g.h_t**2)
    tau = np.asarray(tau, dtype=float)
    e1 = np.exp(-tau)
    e2 = e1 * e1

    Q, r = Quadratic.x(), Quadratic.y()
    b = 2.0 * sgn * g.eps_t
    a = g.h_t * Q - b
    offset = r - a
    r0 = a + b * tau + e1 * offset
    Q0 = Q + (b / g.h_t) * tau
    path_r2 = (
        tau * (a * a)
        + b * tau**2 * a
        + b * b * tau**3 / 3.0
        + 2.0 * (1.0 - e1) * (a * offset)
        + 2.0 * b * (1.0 - (1.0 + tau) * e1) * offset
        + 0.5 * (1.0 - e2) * (offset * offset)
    )
    return _initial_exponent(Q0, r0, g.p_t) - k * path_r2 + 2j * sgn * g.lam_t * tau


def pair_exponent(tau, pair: SpinPair, params: Params) -> Quadratic:
    pair = SpinPair(*pair)
    if pair.diagonal:
        return diagonal_exponent(tau, pair, params)
    return offdiagonal_exponent(tau, pair, params)


def block_exponent(rep, tau, pair: SpinPair, params: Params) -> Quadratic:
    """Exponent of block ``pair`` in the requested representation.

    Variables are (Q, r), (Q, q) or (R, r) for QR, MOMENTUM, POSITION.
    """
    rep = Representation(rep)
    qr = pair_exponent(tau, pair, params)
    if rep is Representation.QR:
        return qr
    if rep is Representation.MOMENTUM:
        return qr.fourier(axis=1, sign=-1)
    return qr.fourier(axis=0, sign=-1) - math.log(2.0 * math.pi)


def log_rho_d_qr(Q, r, tau, spin, params: Params):
    return diagonal_exponent(tau, spin, params)(Q, r)


def log_rho_od_qr(Q, r, tau, pair, params: Params):
    return offdiagonal_exponent(tau, pair, params)(Q, r)


def rho_d_qr(Q, r, tau, spin, params: Params):
    return np.exp(log_rho_d_qr(Q, r, tau, spin, params))


def rho_od_qr(Q, r, tau, pair, params: Params):
    return np.exp(log_rho_od_qr(Q, r, tau, pair, params))


def rho_d_momentum(Q, q, tau, spin, params: Params):
    """Spin-diagonal block in the momentum representation (raw normalisation)."""
    return block_exponent(Representation.MOMENTUM, tau, _diagonal_pair(spin), params).exp(Q, q)


def rho_d_position(R, r, tau, spin, params: Params):
    return block_exponent(Representation.POSITION, tau, _diagonal_pair(spin), params).exp(R, r)


def n_of_tau(tau, params: Params):
    """Momentum-width function N(tau) = d_t/(2 h_t^2) (1 - e^{-2tau}) + e^{-2tau}."""
    _check_tau(tau)
    g = as_groups(params)
    e2 = np.exp(-2.0 * np.asarray(tau, dtype=float))
    return g.d_t / (2.0 * g.h_t**2) * (1.0 - e2) + e2


def m_of_tau(tau, params: Params):
    """Position-width function M(tau); the position pdf has variance M/2."""
    _check_tau(tau)
    g = as_groups(params)
    tau = np.asarray(tau, dtype=float)
    e1 = np.exp(-tau)
    return 1.0 + g.h_t**2 * (1.0 - e1) ** 2 + 0.5 * g.d_t * (2.0 * tau - 3.0 + 4.0 * e1 - e1 * e1)


def momentum_center(tau, spin, params: Params):
    """Mean wavenumber: p_t e^{-tau} + s (eps_t/h_t)(1 - e^{-tau})."""
    _check_tau(tau)
    g = as_groups(params)
    s = _diagonal_pair(spin).sign
    e1 = np.exp(-np.asarray(tau, dtype=float))
    return g.p_t * e1 + s * (g.eps_t / g.h_t) * (1.0 - e1)


def position_center(tau, spin, params: Params):
    """Mean position, the time integral of h_t times :func:`momentum_center`."""
    _check_tau(tau)
    g = as_groups(params)
    s = _diagonal_pair(spin).sign
    tau = np.asarray(tau, dtype=float)
    e1 = np.exp(-tau)
    return g.h_t * g.p_t * (1.0 - e1) + s * g.eps_t * (tau - 1.0 + e1)


def momentum_pdf(u, tau, spin, params: Params):
    """Unit-normalised momentum distribution: Gaussian of variance N/2."""
    n = n_of_tau(tau, params)
    c = momentum_center(tau, spin, params)
    u = np.asarray(u)
    return np.exp(-((u - c) ** 2) / n) / np.sqrt(np.pi * n)


def position_pdf(x, tau, spin, params: Params):
    """Unit-normalised position distribution: Gaussian of variance M/2."""
    mm = m_of_tau(tau, params)
    c = position_center(tau, spin, params)
    x = np.asarray(x)
    return np.exp(-((x - c) ** 2) / mm) / np.sqrt(np.pi * mm)


def position_r2_coefficient(tau, params: Params) -> float:
    """Real r^2 coefficient of -ln rho_d(R, r) at fixed R.

    Tends to d_t / (8 h_t^2) at large tau, which sets the residual
    coherence length of the position-space block.
    """
    expo = block_exponent(Representation.POSITION, tau, UP_UP, params)
    return float(-np.real(expo.cyy))


def envelope_coefficient(params: Params) -> float:
    """Cubic coefficient c3 of -ln|rho_od| in scaled time: d_t eps_t^2 / (3 h_t^2)."""
    g = as_groups(params)
    return g.d_t * g.eps_t**2 / (3.0 * g.h_t**2)


def tau_spin(params: Params) -> float:
    """Spin decoherence time, c3^(-1/3) = (3 h_t^2 / (eps_t^2 d_t))^(1/3)."""
    g = as_groups(params)
    if g.eps_t == 0 or g.d_t == 0:
        raise NoDecoherence("no spin decoherence when eps_t = 0 or d_t = 0")
    return envelope_coefficient(g) ** (-1.0 / 3.0)


def tau_momentum(Q, params: Params) -> float:
    """Momentum decoherence time 1/(d_t Q^2), the printed m^2 gamma^3/(D Q^2).

    The transformed closed form relaxes at the slower asymptotic rate
    :func:`momentum_decay_rate`, a quarter of ``1/tau_momentum``.
    """
    g = as_groups(params)
    if Q == 0 or g.d_t == 0:
        raise NoDecoherence("no momentum decoherence when Q = 0 or d_t = 0")
    return 1.0 / (g.d_t * Q * Q)


def momentum_decay_rate(Q, params: Params) -> float:
    """Asymptotic decay rate of |rho_d(Q, q, tau)| per unit tau: d_t Q^2 / 4."""
    g = as_groups(params)
    return g.d_t * Q * Q / 4.0


def reduced_composite(rep, point, tau, state: SpinState, params: Params) -> np.ndarray:
    """2x2 spin matrix of the composite state at one point of a representation.

    Entries are ``weight * block``: |a|^2 up-up, |b|^2 down-down,
    a b* up-down and a* b down-up, each block normalised to unit trace.
    """
    if not isinstance(state, SpinState):
        state = SpinState(*state)
    x1, x2 = point
    out = np.empty((2, 2), dtype=complex)
    for (i, j), pair in zip(((0, 0), (1, 1), (0, 1), (1, 0)), (UP_UP, DOWN_DOWN, UP_DOWN, DOWN_UP)):
        out[i, j] = state.weight(pair) * block_exponent(rep, tau, pair, params).exp(x1, x2)
    return out
