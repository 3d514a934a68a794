"""Configuration package exports.

Exposes:
- `Settings`: Pydantic settings for numerical and output defaults
- `RunConfig`: resolved configuration of one command-line run
"""

from .settings import RunConfig, Settings

__all__ = ["RunConfig", "Settings"]
