"""
Glauber dynamics, coupling from the past and baseline samplers.
"""

from .cftp import CouplingState, cftp_draws, cftp_sample
from .glauber import (
    ChainState,
    SampleRun,
    default_burn_in_sweeps,
    effective_sample_size,
    er_sample,
    glauber_kernel,
    glauber_step,
    iter_chain,
    run_sweeps,
    sample,
)
from .parallel import sample_replicates
from .rng import Purpose, resolve_seed, stream

__all__ = [
    'ChainState',
    'CouplingState',
    'SampleRun',
    'Purpose',
    'stream',
    'resolve_seed',
    'glauber_step',
    'run_sweeps',
    'iter_chain',
    'sample',
    'sample_replicates',
    'glauber_kernel',
    'default_burn_in_sweeps',
    'effective_sample_size',
    'er_sample',
    'cftp_sample',
    'cftp_draws',
]
