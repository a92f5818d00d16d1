"""Discrete-time simulator for joint switch-controller association and
control devolution, with predictive pre-service of future requests."""

__version__ = "0.1.0"

from .config import SimConfig, load
from .engine import run

__all__ = ["SimConfig", "load", "run", "__version__"]
