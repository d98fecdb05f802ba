"""Deterministic, event-sourced simulator of post-trade services for
fixed-vs-floating interest rate swaps."""

from .app import DEFAULT_SEED, SimulatorApp
from .errors import DomainError

__version__ = "0.1.0"

__all__ = ["SimulatorApp", "DomainError", "DEFAULT_SEED", "__version__"]
