"""
Central limit theorem experiments and rate scans.
"""

from .experiments import (
    DistanceReport,
    binomial_exact_distances,
    edge_clt_experiment,
    histogram,
    lln_check,
    rate_scan,
    subgraph_clt_experiment,
)

__all__ = [
    'DistanceReport',
    'edge_clt_experiment',
    'subgraph_clt_experiment',
    'rate_scan',
    'lln_check',
    'binomial_exact_distances',
    'histogram',
]
