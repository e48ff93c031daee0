"""
Stein-method quantities for nonlinear exponential families.
"""

from .estimators import (
    Estimate,
    SteinEstimates,
    batch_mean,
    batch_sd,
    delta1_i,
    delta2_i,
    delta_sums,
    diagnostic_delta1,
    estimate_all,
    estimate_b,
    estimate_delta2,
    estimate_delta3,
    exact_stein_quantities,
    transfer_check,
)
from .family import ExactLaw, TiltedFamily, ergm_family

__all__ = [
    'TiltedFamily',
    'ExactLaw',
    'ergm_family',
    'Estimate',
    'SteinEstimates',
    'batch_mean',
    'batch_sd',
    'delta1_i',
    'delta2_i',
    'delta_sums',
    'estimate_b',
    'estimate_delta2',
    'estimate_delta3',
    'estimate_all',
    'diagnostic_delta1',
    'exact_stein_quantities',
    'transfer_check',
]
