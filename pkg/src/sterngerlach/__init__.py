"""Closed-form decoherence of a spin measured by a damped pointer, with independent oracles."""

__version__ = "0.1.0"

from .params import (  # noqa: E402
    ALL_PAIRS,
    DOWN_DOWN,
    DOWN_UP,
    FIG1_GROUPS,
    UP_DOWN,
    UP_UP,
    Axis,
    DensitySlice,
    DimensionlessGroups,
    GridSpec,
    PhysicalParams,
    Representation,
    Spin,
    SpinPair,
    SpinState,
    from_dimensionless,
    make_params,
    params_from_temperature,
    to_dimensionless,
)

__all__ = [
    "ALL_PAIRS",
    "DOWN_DOWN",
    "DOWN_UP",
    "FIG1_GROUPS",
    "UP_DOWN",
    "UP_UP",
    "Axis",
    "DensitySlice",
    "DimensionlessGroups",
    "GridSpec",
    "PhysicalParams",
    "Representation",
    "Spin",
    "SpinPair",
    "SpinState",
    "from_dimensionless",
    "make_params",
    "params_from_temperature",
    "to_dimensionless",
]
