"""
Independent replicate chains in worker processes.

Chain c always uses stream id c, so the output does not depend on the
number of workers.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

from ..model import ErgmSpec
from ..utils.config import get_config
from ..utils.system_info import recommended_workers
from .glauber import SampleRun, sample
from .rng import resolve_seed

logger = logging.getLogger(__name__)


def _run_chain(args) -> SampleRun:
    spec, n, burn, thin, count, seed, chain_id = args
    return sample(spec, n, burn, thin, count, seed, chain_id=chain_id)


def sample_replicates(
    spec: ErgmSpec,
    n: int,
    burn_in_sweeps: Optional[int],
    thin_sweeps: int,
    count_per_chain: int,
    chains: int,
    seed: Optional[int],
    workers: Optional[int] = None,
) -> List[SampleRun]:
    """
    Run ``chains`` independent Glauber chains.

    Args:
        workers: Process count; None uses the configured or detected value

    Returns:
        One SampleRun per chain, in chain order
    """
    seed = resolve_seed(seed)
    workers = recommended_workers(workers if workers is not None else get_config().workers)
    workers = min(workers, chains)
    jobs = [(spec, n, burn_in_sweeps, thin_sweeps, count_per_chain, seed, c) for c in range(chains)]
    logger.info(f"Running {chains} chains at n={n} on {workers} worker(s), seed {seed}")
    if workers <= 1:
        return [_run_chain(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_chain, jobs))
