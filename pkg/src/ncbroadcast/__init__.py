"""Batch-coded broadcast scheduling toolkit.

Exact two-receiver completion-time solving and policy certification,
N-receiver Monte Carlo simulation of the lr/rrnc/rs batch-selection
policies, and a real GF(256) random-linear codec.
"""

from .model import ConfigError, SystemConfig, validate_config

__version__ = "0.1.0"

__all__ = ["ConfigError", "SystemConfig", "validate_config", "__version__"]
