"""Independent numerical solution paths used to certify the closed forms."""

from .characteristics import (
    CharacteristicPath,
    closed_form_path_d,
    oracle_log_rho,
    oracle_rho_d,
    oracle_rho_od,
    trace_characteristic_d,
    trace_characteristic_od,
)
from .upwind import (
    DEFAULT_Q_AXIS,
    DEFAULT_R_AXIS,
    RefinedSolution,
    UpwindConfig,
    refined_solve_d,
    refined_solve_od,
    romberg,
    upwind_solve_d,
    upwind_solve_od,
)

__all__ = [
    "CharacteristicPath",
    "closed_form_path_d",
    "oracle_log_rho",
    "oracle_rho_d",
    "oracle_rho_od",
    "trace_characteristic_d",
    "trace_characteristic_od",
    "DEFAULT_Q_AXIS",
    "DEFAULT_R_AXIS",
    "RefinedSolution",
    "UpwindConfig",
    "refined_solve_d",
    "refined_solve_od",
    "romberg",
    "upwind_solve_d",
    "upwind_solve_od",
]
