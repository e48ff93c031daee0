"""
ERGM specification, fixed-point region and closed-form quantities.
"""

from .region import (
    Classification,
    Phi,
    Phi_prime,
    RegionReport,
    RootInfo,
    phi,
    phi_prime,
    sigma_n_sq,
    solve_fixed_point,
)
from .spec import ErgmSpec, load_spec
from .weights import (
    ConditionalOdds,
    centered_tilt_g,
    cond_log_odds,
    hom_vector,
    log_weight,
    tilt_difference,
)

__all__ = [
    'ErgmSpec',
    'load_spec',
    'Classification',
    'RegionReport',
    'RootInfo',
    'Phi',
    'Phi_prime',
    'phi',
    'phi_prime',
    'solve_fixed_point',
    'sigma_n_sq',
    'ConditionalOdds',
    'hom_vector',
    'log_weight',
    'cond_log_odds',
    'centered_tilt_g',
    'tilt_difference',
]
