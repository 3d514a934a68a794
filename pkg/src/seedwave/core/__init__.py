"""Core model types and shared errors.

Exposes:
- `ModelParams`, `OffspringLaw`, `Variant`: parameter containers
- `effective_selection`, `selection_term`: the branching nonlinearity
- the `SeedwaveError` hierarchy
"""

from .errors import (
    ConfigurationError,
    DivergenceError,
    DomainError,
    ExperimentFailure,
    InsufficientSamplesError,
    NonRealSpeedError,
    NotBracketedError,
    PopulationOverflowError,
    SeedwaveError,
    SolverError,
)
from .model import (
    ModelParams,
    OffspringLaw,
    Variant,
    effective_selection,
    load_params_file,
    selection_term,
)

__all__ = [
    "ConfigurationError",
    "DivergenceError",
    "DomainError",
    "ExperimentFailure",
    "InsufficientSamplesError",
    "ModelParams",
    "NonRealSpeedError",
    "NotBracketedError",
    "OffspringLaw",
    "PopulationOverflowError",
    "SeedwaveError",
    "SolverError",
    "Variant",
    "effective_selection",
    "load_params_file",
    "selection_term",
]
