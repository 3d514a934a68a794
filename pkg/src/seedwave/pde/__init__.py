"""Finite-difference integration and front measurements.

Exposes:
- `Grid1D`, `FieldPair`, `FrontTrace`: discretization containers
- `heaviside_ic`, `exponential_ic`: initial conditions
- `FrontSolver`, `integrate`, `integrate_linear_drifted`, `PDERun`: solvers
- `front_position`, `front_speed`, `tail_decay_rate`, `comoving_profile`,
  `is_monotone`: measurements
"""

from .fronts import (
    comoving_profile,
    front_position,
    front_speed,
    is_monotone,
    tail_decay_rate,
)
from .grid import FieldPair, FrontTrace, Grid1D, exponential_ic, heaviside_ic
from .solver import FrontSolver, PDERun, integrate, integrate_linear_drifted

__all__ = [
    "FieldPair",
    "FrontSolver",
    "FrontTrace",
    "Grid1D",
    "PDERun",
    "comoving_profile",
    "exponential_ic",
    "front_position",
    "front_speed",
    "heaviside_ic",
    "integrate",
    "integrate_linear_drifted",
    "is_monotone",
    "tail_decay_rate",
]
