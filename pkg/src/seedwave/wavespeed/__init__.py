"""Speed functions and critical wave-speeds.

Exposes:
- `speed_function`, `speed_function_numeric`, `speed_derivative`: the two
  speed branches at a decay rate
- `eigen_matrix`, `determinant_poly`, `determinant_roots`,
  `perron_eigenvector`, `diagonal_entries`: the eigenvalue problem
- `critical_speed`, `sweep_critical`: minimization and parameter sweeps
- `growth_rate`, `expected_population`: first-moment population growth
"""

from .critical import (
    SWEEP_COLUMNS,
    CriticalSpeed,
    SweepAxis,
    critical_speed,
    scan_trace,
    sweep_critical,
)
from .speed import (
    HISTORICAL_UPPER_BOUND,
    SpeedEval,
    determinant_poly,
    determinant_roots,
    diagonal_entries,
    eigen_matrix,
    expected_population,
    flow_matrix,
    growth_rate,
    linear_matrices,
    perron_eigenvector,
    radicand,
    speed_derivative,
    speed_function,
    speed_function_numeric,
    stationary_active_fraction,
)

__all__ = [
    "CriticalSpeed",
    "HISTORICAL_UPPER_BOUND",
    "SWEEP_COLUMNS",
    "SpeedEval",
    "SweepAxis",
    "critical_speed",
    "determinant_poly",
    "determinant_roots",
    "diagonal_entries",
    "eigen_matrix",
    "expected_population",
    "flow_matrix",
    "growth_rate",
    "linear_matrices",
    "perron_eigenvector",
    "radicand",
    "scan_trace",
    "speed_derivative",
    "speed_function",
    "speed_function_numeric",
    "stationary_active_fraction",
    "sweep_critical",
]
