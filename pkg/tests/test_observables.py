import math

import numpy as np
import pytest

from sterngerlach import analytic, observables
from sterngerlach.errors import InsufficientSamples, NoDecoherence, NonNegativeTimeRequired, PeaksNotResolved
from sterngerlach.params import UP_DOWN, GridSpec, Spin, SpinState

HALF = SpinState(math.sqrt(0.5), math.sqrt(0.5))


def test_scan_single_branch_is_pdf(fig1):
    grid = GridSpec.for_rep("momentum", (0, 0, 1), (-4, 4, 81))
    sl = observables.scan_density("momentum", grid, 2.0, SpinState(1, 0), fig1)
    q = sl.axes()[1]
    assert np.allclose(sl.values[0] / (2 * np.pi), analytic.momentum_pdf(q, 2.0, Spin.UP, fig1), rtol=1e-12)


def test_scan_lobes_uv(fig1):
    axis = (-4, 4, 201)
    sl = observables.scan_density("momentum", GridSpec(axis, axis, ("u", "v")), 3.0, HALF, fig1)
    u, v = sl.grid.mesh()
    vals = np.real(sl.values)
    for sign in (1, -1):
        i = np.argmax(np.where(sign * (u + v) > 0, vals, -np.inf))
        assert u.ravel()[i] == pytest.approx(v.ravel()[i])
        assert abs(u.ravel()[i] - sign * 0.9502) <= 0.04 + 1e-12


def test_scan_trace(fig1):
    grid = GridSpec.for_rep("qr", (-1, 1, 5), (-1, 1, 5))
    for state in (HALF, SpinState(0.6, 0.8j)):
        sl = observables.scan_density("qr", grid, 2.5, state, fig1)
        assert observables.slice_trace(sl) == pytest.approx(1.0, abs=1e-12)
    grid = GridSpec.for_rep("momentum", (-1, 1, 3), (-8, 8, 801))
    sl = observables.scan_density("momentum", grid, 2.5, HALF, fig1)
    assert observables.slice_trace(sl) == pytest.approx(1.0, abs=1e-12)


def test_scan_block(fig1):
    grid = GridSpec.for_rep("qr", (-1, 1, 3), (-1, 1, 3))
    state = SpinState(0.6, 0.8)
    sl = observables.scan_density("qr", grid, 1.0, state, fig1, block=UP_DOWN)
    assert sl.block == "up-down"
    assert sl.values[1, 1] == pytest.approx(0.48 * analytic.rho_od_qr(0, 0, 1.0, UP_DOWN, fig1))


def test_scan_requires_normalized_state(fig1):
    from sterngerlach.errors import UnnormalizedSpinState

    grid = GridSpec.for_rep("qr", (-1, 1, 3), (-1, 1, 3))
    with pytest.raises(UnnormalizedSpinState):
        observables.scan_density("qr", grid, 1.0, (1.0, 0.5), fig1)


def test_scan_order_independent(fig1):
    # evaluating row by row, in shuffled order, reproduces the full scan bit for bit
    grid = GridSpec.for_rep("position", (-3, 3, 31), (-2, 2, 21))
    sl = observables.scan_density("position", grid, 1.5, HALF, fig1)
    rows = np.empty(grid.shape, dtype=complex)
    for i in np.random.default_rng(0).permutation(grid.shape[0]):
        R = grid.axis1.values()[i]
        line = GridSpec((R, R, 1), grid.axis2, grid.labels)
        rows[i] = observables.scan_density("position", line, 1.5, HALF, fig1).values[0]
    assert np.array_equal(sl.values, rows)


def test_peak_centers(fig1):
    r0 = observables.peak_centers("momentum", 0.0, fig1)
    assert r0.up_center == pytest.approx(0.2) and r0.down_center == pytest.approx(0.2) and r0.separation == 0
    r3 = observables.peak_centers("momentum", 3.0, fig1)
    e3 = math.exp(-3)
    assert r3.up_center == pytest.approx((1 - e3) + 0.2 * e3, rel=1e-14)
    assert r3.down_center == pytest.approx(-(1 - e3) + 0.2 * e3, rel=1e-14)
    assert observables.peak_centers("momentum", 60.0, fig1).separation == pytest.approx(2.0, rel=1e-14)
    assert observables.peak_centers("position", 1.0, fig1).width > 0


def test_separation_monotone_and_converges(fig1):
    taus = np.linspace(0, 12, 121)
    sep = np.array([observables.peak_centers("momentum", t, fig1).separation for t in taus])
    assert np.all(np.diff(sep) >= 0)
    assert np.allclose(2.0 - sep, 2.0 * np.exp(-taus), rtol=1e-12, atol=1e-15)


def test_grid_peak_within_one_cell(fig1):
    grid = GridSpec.for_rep("momentum", (0, 0, 1), (-4, 4, 161))
    sl = observables.scan_density("momentum", grid, 3.0, SpinState(0, 1), fig1)
    _, q = observables.grid_peak(sl)
    assert abs(q - observables.peak_centers("momentum", 3.0, fig1).down_center) <= grid.axis2.step


def test_widths(fig1):
    w = observables.widths(6e4, fig1)
    assert w.w1 == pytest.approx(4.0, rel=1e-4)
    late = [observables.widths(t, fig1).w2 ** 2 for t in (100.0, 101.0)]
    assert late[1] - late[0] == pytest.approx(0.5, rel=1e-12)
    ratios = [observables.widths(t, fig1).ratio for t in np.linspace(1, 30, 59)]
    assert np.all(np.diff(ratios) > 0)
    with pytest.raises(NonNegativeTimeRequired):
        observables.widths(0.0, fig1)


def test_coarse_grain_window(fig1):
    assert observables.coarse_grain_window(0.1, fig1).empty
    win = observables.coarse_grain_window(100.0, fig1)
    assert not win.empty and (win.l_min, win.l_max) == (1.0, 400.0)
    assert observables.coarse_grain_window(200.0, fig1).l_max == 2 * win.l_max


def test_fit_envelope(fig1):
    fit = observables.fit_envelope(observables.envelope_samples(fig1), fig1)
    assert fit.c3_hat == pytest.approx(1 / 3, rel=0.01)
    assert fit.residual >= 0 and fit.c3_hat >= 0
    doubled = fig1.replace(eps_t=4.0)
    fit2 = observables.fit_envelope(observables.envelope_samples(doubled), doubled)
    assert fit2.c3_hat / fit.c3_hat == pytest.approx(4.0, rel=0.02)


def test_fit_envelope_oracle_source(fig1):
    fit = observables.fit_envelope(observables.envelope_samples(fig1, 12), fig1, source="oracle")
    assert fit.c3_hat == pytest.approx(1 / 3, rel=0.01)


def test_fit_envelope_errors(fig1):
    with pytest.raises(InsufficientSamples):
        observables.fit_envelope([6, 7, 8, 9, 10], fig1)
    with pytest.raises(InsufficientSamples):
        observables.fit_envelope(np.linspace(6, 7, 10), fig1)
    with pytest.raises(NoDecoherence):
        observables.fit_envelope(np.linspace(6, 16, 10), fig1.replace(eps_t=0.0))


def _split(fig1, a2, tau=6.0, n=2001):
    grid = GridSpec.for_rep("momentum", (-1, 1, 3), (-6, 6, n))
    state = SpinState(math.sqrt(a2), math.sqrt(1 - a2))
    return observables.probability_split(observables.scan_density("momentum", grid, tau, state, fig1), fig1)


@pytest.mark.parametrize("a2", [0.5, 0.36])
def test_probability_split(fig1, a2):
    up, down = _split(fig1, a2)
    assert up == pytest.approx(a2, abs=0.01) and down == pytest.approx(1 - a2, abs=0.01)
    assert up + down == pytest.approx(1.0, abs=1e-9)


def test_probability_split_pure_up(fig1):
    # the Gaussian tail past the midpoint is 3.3e-5 at tau = 6, so only +-1e-4 is attainable
    up, down = _split(fig1, 1.0)
    assert up == pytest.approx(1.0, abs=1e-4) and down == pytest.approx(0.0, abs=1e-4)


def test_probability_split_too_early(fig1):
    with pytest.raises(PeaksNotResolved):
        _split(fig1, 0.5, tau=2.0)
    with pytest.raises(PeaksNotResolved):
        _split(fig1.replace(eps_t=0.0), 0.5)


def test_momentum_decay_fit(fig1):
    rate = observables.momentum_decay_fit(1.0, np.linspace(8, 16, 33), fig1)
    assert rate == pytest.approx(analytic.momentum_decay_rate(1.0, fig1), rel=0.01)
