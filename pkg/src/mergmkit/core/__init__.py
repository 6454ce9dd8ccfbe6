"""
mergmkit core functionality.

Network containers, data models, errors and run configuration. Sampling,
estimation and reporting live in their own modules and are imported by
path (``mergmkit.core.sampler``, ``mergmkit.core.estimator`` ...).
"""

from .config import Config
from .errors import MergmError
from .models import (
    ChainConfig,
    DyadRef,
    EstimationSettings,
    FitResult,
    ModelSpec,
    NodeLevel,
    RunConfig,
    RunMode,
    StatDescriptor,
    StatLevel,
    TieLevel,
)
from .network import MultilevelNetwork, build_network

__all__ = [
    'Config',
    'MergmError',
    'ChainConfig',
    'DyadRef',
    'EstimationSettings',
    'FitResult',
    'ModelSpec',
    'NodeLevel',
    'RunConfig',
    'RunMode',
    'StatDescriptor',
    'StatLevel',
    'TieLevel',
    'MultilevelNetwork',
    'build_network',
]
