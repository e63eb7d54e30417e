"""Measurement-level quantities: sampled densities, peaks, widths and fits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic
from .errors import InsufficientSamples, NoDecoherence, NonNegativeTimeRequired, PeaksNotResolved
from .params import (
    DOWN_DOWN,
    UP_DOWN,
    UP_UP,
    DensitySlice,
    GridSpec,
    Params,
    Representation,
    Spin,
    SpinPair,
    SpinState,
    as_groups,
)

COMPOSITE = "composite"


def _coordinates(rep: Representation, grid: GridSpec):
    """Map the grid onto the representation's own variables.

    Momentum grids labelled (u, v) are plotted in the single-particle
    momenta u = q + Q/2, v = q - Q/2.
    """
    x1, x2 = grid.mesh()
    if rep is Representation.MOMENTUM and grid.labels == ("u", "v"):
        return x1 - x2, 0.5 * (x1 + x2)
    return x1, x2


def scan_density(rep, grid: GridSpec, tau, state: SpinState, params: Params, block=COMPOSITE) -> DensitySlice:
    """Sample the composite spin-traced density (or one weighted block) on a grid.

    The composite is |a|^2 rho_upup + |b|^2 rho_downdown; a ``SpinPair``
    block is returned with its weight from ``state``.
    """
    rep = Representation(rep)
    if not isinstance(state, SpinState):
        state = SpinState(*state)
    x1, x2 = _coordinates(rep, grid)
    if block == COMPOSITE:
        values = state.p_up * analytic.block_exponent(rep, tau, UP_UP, params).exp(x1, x2)
        values = values + state.p_down * analytic.block_exponent(rep, tau, DOWN_DOWN, params).exp(x1, x2)
        label = COMPOSITE
    else:
        pair = SpinPair(*block)
        values = state.weight(pair) * analytic.block_exponent(rep, tau, pair, params).exp(x1, x2)
        label = pair.label
    return DensitySlice(rep, label, float(tau), grid, values, "analytic")


def slice_trace(sl: DensitySlice) -> complex:
    """Trace of a sampled composite slice.

    QR and POSITION slices read the trace off the Q = 0 / r = 0 point or
    line; MOMENTUM slices integrate the Q = 0 row (raw 2 pi normalisation).
    """
    a1, a2 = sl.axes()
    if sl.representation is Representation.QR:
        i = _index_of_zero(a1, "Q")
        j = _index_of_zero(a2, "r")
        return complex(sl.values[i, j])
    if sl.representation is Representation.MOMENTUM:
        i = _index_of_zero(a1, "Q")
        return complex(np.trapezoid(sl.values[i], a2) / (2.0 * math.pi))
    j = _index_of_zero(a2, "r")
    return complex(np.trapezoid(sl.values[:, j], a1))


def _index_of_zero(axis: np.ndarray, name: str) -> int:
    i = int(np.argmin(np.abs(axis)))
    if abs(axis[i]) > 1e-12:
        raise ValueError(f"grid has no {name} = 0 line")
    return i


@dataclass(frozen=True)
class PeakReport:
    tau: float
    up_center: float
    down_center: float
    separation: float
    width: float


def peak_centers(rep, tau, params: Params) -> PeakReport:
    """Closed-form up/down centres and the common standard deviation.

    MOMENTUM gives wavenumbers, POSITION gives lengths.
    """
    rep = Representation(rep)
    if rep is Representation.MOMENTUM:
        up = float(analytic.momentum_center(tau, Spin.UP, params))
        down = float(analytic.momentum_center(tau, Spin.DOWN, params))
        width = math.sqrt(float(analytic.n_of_tau(tau, params)) / 2.0)
    elif rep is Representation.POSITION:
        up = float(analytic.position_center(tau, Spin.UP, params))
        down = float(analytic.position_center(tau, Spin.DOWN, params))
        width = math.sqrt(float(analytic.m_of_tau(tau, params)) / 2.0)
    else:
        raise ValueError("peak centres are defined for MOMENTUM and POSITION only")
    return PeakReport(float(tau), up, down, abs(up - down), width)


def grid_peak(sl: DensitySlice, mask=None) -> tuple[float, float]:
    """Grid location of the largest real value; diagnostic only (one-cell resolution)."""
    vals = np.real(sl.values)
    if mask is not None:
        vals = np.where(mask, vals, -np.inf)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    a1, a2 = sl.axes()
    return float(a1[i]), float(a2[j])


@dataclass(frozen=True)
class WidthsReport:
    tau: float
    w1: float
    w2: float

    @property
    def ratio(self) -> float:
        return self.w2 / self.w1


def widths(tau, params: Params) -> WidthsReport:
    """Coherence width w1 in r and spread w2 in R of the position-space block."""
    if not tau > 0:
        raise NonNegativeTimeRequired(tau)
    w1 = (2.0 * analytic.position_r2_coefficient(tau, params)) ** -0.5
    w2 = math.sqrt(float(analytic.m_of_tau(tau, params)) / 2.0)
    return WidthsReport(float(tau), w1, w2)


@dataclass(frozen=True)
class CoarseWindow:
    l_min: float
    l_max: float

    @property
    def empty(self) -> bool:
        return not self.l_min < self.l_max


def coarse_grain_window(tau, params: Params) -> CoarseWindow:
    """Resolution window for a local classical picture in position space.

    The bounds ``l > max(gamma/eps, gamma/D)`` and ``l < D hbar^2 tau / (m^2 gamma^2)``
    are taken literally in canonical units (1/eps_t, 1/d_t and d_t h_t^2 tau).
    Their dimensions do not match a length, so treat the window as
    indicative only.
    """
    if not tau > 0:
        raise NonNegativeTimeRequired(tau)
    g = as_groups(params)
    lower = max(1.0 / g.eps_t if g.eps_t else math.inf, 1.0 / g.d_t if g.d_t else math.inf)
    upper = g.d_t * g.h_t**2 * float(tau)
    return CoarseWindow(lower, upper)


@dataclass(frozen=True)
class EnvelopeFit:
    tau: np.ndarray
    neg_log_modulus: np.ndarray
    c3_hat: float
    coefficients: np.ndarray
    residual: float


def envelope_samples(params: Params, count: int = 64) -> np.ndarray:
    """Default fit window for the cubic envelope.

    Starts at max(tau_s, 6), past the e^{-tau} transients, and spans
    max(3 tau_s, 10).
    """
    ts = analytic.tau_spin(params)
    lo = max(ts, 6.0)
    return np.linspace(lo, lo + max(3.0 * ts, 10.0), count)


def fit_envelope(tau_samples, params: Params, source: str = "analytic") -> EnvelopeFit:
    """Least-squares cubic fit of -ln|rho_updown(0, 0, tau)|.

    ``source="oracle"`` takes the samples from the characteristic oracle
    instead of the closed form.
    """
    ts = analytic.tau_spin(params)
    tau = np.asarray(tau_samples, dtype=float)
    if tau.size < 6 or np.ptp(tau) < 3.0 * ts:
        raise InsufficientSamples(f"need >= 6 samples spanning >= 3 tau_s = {3 * ts:.4g}")
    if source == "analytic":
        y = -np.real(analytic.log_rho_od_qr(0.0, 0.0, tau, UP_DOWN, params))
    elif source == "oracle":
        from .oracles import oracle_log_rho

        y = -np.array([oracle_log_rho(0.0, 0.0, t, UP_DOWN, params).real for t in tau])
    else:
        raise ValueError(f"unknown source {source!r}")
    coeffs, res, *_ = np.polyfit(tau, y, 3, full=True)
    residual = float(math.sqrt(res[0] / tau.size)) if res.size else 0.0
    return EnvelopeFit(tau, y, float(coeffs[0]), coeffs, residual)


def momentum_decay_fit(Q, tau_samples, params: Params, spin=Spin.UP) -> float:
    """Slope of -ln|rho_d(Q, q = centre(tau), tau)| against tau."""
    tau = np.asarray(tau_samples, dtype=float)
    logs = []
    for t in tau:
        expo = analytic.block_exponent(Representation.MOMENTUM, t, SpinPair(Spin(spin), Spin(spin)), params)
        logs.append(np.real(expo(Q, analytic.momentum_center(t, spin, params))))
    return float(-np.polyfit(tau, np.array(logs), 1)[0])


def probability_split(sl: DensitySlice, params: Params) -> tuple[float, float]:
    """Probability of the up and down pointer readings from a momentum slice.

    Integrates the Q = 0 row of a composite MOMENTUM slice on either side of
    the midpoint between the two closed-form centres.
    """
    if sl.representation is not Representation.MOMENTUM or sl.grid.labels != ("Q", "q"):
        raise ValueError("probability_split needs a MOMENTUM slice on a (Q, q) grid")
    tau = sl.tau
    try:
        ts = analytic.tau_spin(params)
    except NoDecoherence as exc:
        raise PeaksNotResolved(str(exc)) from None
    if tau < 3.0 * max(ts, 1.0):
        raise PeaksNotResolved(f"tau = {tau} is before 3 max(tau_s, 1) = {3 * max(ts, 1.0):.4g}")
    peaks = peak_centers(Representation.MOMENTUM, tau, params)
    if peaks.separation < 4.0 * peaks.width:
        raise PeaksNotResolved(f"separation {peaks.separation:.4g} < 4 widths ({peaks.width:.4g})")

    a1, q = sl.axes()
    f = np.real(sl.values[_index_of_zero(a1, "Q")])
    mid = 0.5 * (peaks.up_center + peaks.down_center)
    f_mid = float(np.interp(mid, q, f))
    below = q < mid
    low = np.trapezoid(np.append(f[below], f_mid), np.append(q[below], mid))
    high = np.trapezoid(np.insert(f[~below], 0, f_mid), np.insert(q[~below], 0, mid))
    total = low + high
    p_low, p_high = low / total, high / total
    if peaks.up_center > peaks.down_center:
        return float(p_high), float(p_low)
    return float(p_low), float(p_high)
