import math

import numpy as np
import pytest

from sterngerlach.errors import (
    InvalidValue,
    NonFiniteParameter,
    NonPositiveParameter,
    UnnormalizedSpinState,
)
from sterngerlach.params import (
    ALL_PAIRS,
    DOWN_UP,
    FIG1_GROUPS,
    UP_DOWN,
    UP_UP,
    Axis,
    DensitySlice,
    DimensionlessGroups,
    GridSpec,
    Representation,
    Spin,
    SpinPair,
    SpinState,
    from_dimensionless,
    make_params,
    params_from_temperature,
    to_dimensionless,
)


def test_fig1_params_give_fig1_groups():
    p = make_params(1, 1, 1, 2, 0, 2, 1, 0.2)
    g = to_dimensionless(p)
    assert (g.eps_t, g.d_t, g.h_t, g.p_t, g.lam_t) == (2.0, 1.0, 2.0, 0.2, 0.0)
    assert g == FIG1_GROUPS


def test_zero_sigma_rejected():
    with pytest.raises(NonPositiveParameter) as err:
        make_params(1, 1, 1, 2, 0, 2, 0, 0.2)
    assert err.value.name == "sigma"


@pytest.mark.parametrize("field, index", [("m", 0), ("gamma", 1), ("hbar", 5)])
def test_other_positive_fields(field, index):
    args = [1, 1, 1, 2, 0, 2, 1, 0.2]
    args[index] = -1.0
    with pytest.raises(NonPositiveParameter) as err:
        make_params(*args)
    assert err.value.name == field


def test_negative_diffusion_rejected():
    with pytest.raises(NonPositiveParameter):
        make_params(1, 1, -0.1, 2, 0, 2, 1, 0.2)


def test_zero_diffusion_allowed():
    assert make_params(1, 1, 0, 2, 0, 2, 1, 0.2).D == 0.0


@pytest.mark.parametrize("bad", [math.inf, math.nan])
def test_non_finite_rejected(bad):
    with pytest.raises(NonFiniteParameter):
        make_params(1, 1, 1, bad, 0, 2, 1, 0.2)


@pytest.mark.parametrize("m, gamma, kT, D", [(1, 1, 0.5, 1.0), (1, 1, 0.0, 0.0), (2, 3, 1.0, 12.0)])
def test_temperature_to_diffusion(m, gamma, kT, D):
    assert params_from_temperature(m, gamma, kT, 1, 0, 1, 1, 0).D == D


def test_all_ones_groups():
    g = to_dimensionless(make_params(1, 1, 1, 1, 0.7, 1, 1, 1))
    assert (g.eps_t, g.d_t, g.h_t, g.p_t) == (1.0, 1.0, 1.0, 1.0)
    assert g.lam_t == 0.7


def test_doubling_sigma_quarters_h_and_d():
    a = to_dimensionless(make_params(1.3, 0.7, 0.9, 2.1, 0.4, 1.1, 1.0, 0.3))
    b = to_dimensionless(make_params(1.3, 0.7, 0.9, 2.1, 0.4, 1.1, 2.0, 0.3))
    # direct formulas, recomputed here
    assert b.h_t == pytest.approx(1.1 / (1.3 * 0.7 * 4.0), rel=1e-15)
    assert b.d_t == pytest.approx(0.9 / (1.3**2 * 0.7**3 * 4.0), rel=1e-15)
    assert b.h_t == pytest.approx(a.h_t / 4, rel=1e-15)
    assert b.d_t == pytest.approx(a.d_t / 4, rel=1e-15)
    assert b.eps_t == pytest.approx(a.eps_t / 2, rel=1e-15)
    assert b.p_t == pytest.approx(a.p_t * 2, rel=1e-15)


def test_round_trip():
    p = make_params(1.3, 0.7, 0.9, 2.1, 0.4, 1.1, 1.7, 0.3)
    q = from_dimensionless(to_dimensionless(p), p.sigma, p.gamma, p.m)
    for name in ("m", "gamma", "D", "epsilon", "lam", "hbar", "sigma", "pbar"):
        assert getattr(q, name) == pytest.approx(getattr(p, name), rel=1e-12)


def test_groups_validation():
    with pytest.raises(NonPositiveParameter):
        DimensionlessGroups(1, 1, 0, 0)
    with pytest.raises(NonPositiveParameter):
        DimensionlessGroups(1, -1, 1, 0)
    assert FIG1_GROUPS.replace(eps_t=0).eps_t == 0


def test_spin_pairs():
    assert len(ALL_PAIRS) == 4 and len(set(ALL_PAIRS)) == 4
    assert UP_UP.diagonal and not UP_DOWN.diagonal
    assert UP_DOWN.sign == 1 and DOWN_UP.sign == -1
    assert SpinPair.from_label("down-up") == DOWN_UP
    assert [s.value for s in Spin] == [1, -1]
    with pytest.raises(InvalidValue):
        SpinPair.from_label("sideways-up")


def test_spin_state():
    st = SpinState(0.6, 0.8j)
    assert st.p_up == pytest.approx(0.36) and st.p_down == pytest.approx(0.64)
    assert st.weight(UP_DOWN) == pytest.approx(0.6 * (-0.8j))
    assert st.weight(DOWN_UP) == pytest.approx(np.conj(st.weight(UP_DOWN)))
    with pytest.raises(UnnormalizedSpinState):
        SpinState(1.0, 1e-5)


def test_grid_and_slice():
    grid = GridSpec.for_rep(Representation.MOMENTUM, (-1, 1, 3), (0, 2, 5))
    assert grid.labels == ("Q", "q") and grid.shape == (3, 5)
    assert Axis(0, 1, 5).step == 0.25
    with pytest.raises(InvalidValue):
        GridSpec((1, 0, 3), (0, 1, 3))
    with pytest.raises(InvalidValue):
        GridSpec((0, 1, 1), (0, 1, 3))
    sl = DensitySlice("momentum", "composite", 1.0, grid, np.ones(grid.shape))
    assert sl.representation is Representation.MOMENTUM
    assert not sl.values.flags.writeable
    with pytest.raises(InvalidValue):
        DensitySlice("qr", "composite", 1.0, grid, np.ones((2, 5)))
    with pytest.raises(InvalidValue):
        DensitySlice("qr", "composite", 1.0, grid, np.full(grid.shape, np.nan))
    with pytest.raises(InvalidValue):
        DensitySlice("qr", "composite", 1.0, grid, np.ones(grid.shape), provenance="guess")
