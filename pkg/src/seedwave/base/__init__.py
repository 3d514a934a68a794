"""Shared base utilities (logging)."""

from .loggable import Loggable, setup_logging

__all__ = ["Loggable", "setup_logging"]
