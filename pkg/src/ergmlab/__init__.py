"""
ergmlab - simulation and verification lab for exponential random graph models.

Exact subgraph counting, fixed-point classification, Glauber and
coupling-from-the-past samplers, exhaustive enumeration for small hosts,
Stein-method estimators, the Curie-Weiss worked example, Hoeffding building
blocks and normal-approximation experiments.
"""

__version__ = "0.1.0"

from .errors import (
    CoalescenceTimeoutError,
    ConfigError,
    DomainError,
    ExactSizeError,
    LabError,
    MissingMomentError,
    NotSubcriticalError,
    PreconditionError,
    UnsupportedRegimeError,
)
from .graphs import EdgeGraph, EdgeId, Template, hom_count, rooted_hom_count
from .model import ErgmSpec, RegionReport, load_spec, solve_fixed_point

__all__ = [
    '__version__',
    'LabError',
    'DomainError',
    'ConfigError',
    'PreconditionError',
    'NotSubcriticalError',
    'UnsupportedRegimeError',
    'ExactSizeError',
    'CoalescenceTimeoutError',
    'MissingMomentError',
    'EdgeGraph',
    'EdgeId',
    'Template',
    'hom_count',
    'rooted_hom_count',
    'ErgmSpec',
    'RegionReport',
    'load_spec',
    'solve_fixed_point',
]
