"""Seedwave package public API and version.

Exposes convenient imports for external consumers:
- `Settings`: numerical and output defaults
- `ModelParams`, `Variant`, `OffspringLaw`: model parameters
- `speed_function`, `critical_speed`: wave-speed analysis
- `integrate`: front integration of the F-KPP systems
- `simulate`: on/off branching Brownian motion
- `default_catalog`: the experiment harness
"""

__version__ = "0.1.0"

from .config.settings import Settings
from .core.model import ModelParams, OffspringLaw, Variant
from .harness.manager import default_catalog
from .particles.simulate import simulate
from .pde.solver import integrate
from .wavespeed.critical import critical_speed
from .wavespeed.speed import speed_function

__all__ = [
    "ModelParams",
    "OffspringLaw",
    "Settings",
    "Variant",
    "critical_speed",
    "default_catalog",
    "integrate",
    "simulate",
    "speed_function",
]
