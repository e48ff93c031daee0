"""
Counter-based random streams.

Every random draw in the package comes from a Philox generator keyed by
(seed, purpose, ...counters). Re-deriving a key reproduces the stream, so
coupling from the past can revisit earlier time slots and parallel chains
do not depend on scheduling.
"""

import logging
from enum import IntEnum
from typing import Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)


class Purpose(IntEnum):
    CHAIN = 0
    CFTP = 1
    ERDOS_RENYI = 2
    EXACT_DRAW = 3
    STEIN = 4
    BOOTSTRAP = 5
    IDENTITIES = 6
    CURIE_WEISS = 7
    IMPORTANCE = 8


def stream(seed: int, purpose: Purpose, *counters: int) -> np.random.Generator:
    """Generator for the key (seed, purpose, counters...)."""
    key = (int(purpose),) + tuple(int(c) for c in counters)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=key)))


def resolve_seed(seed: Optional[int]) -> int:
    """Return ``seed``, or draw and log a fresh one so the run stays replayable."""
    if seed is not None:
        return int(seed)
    fresh = int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0] >> 1)
    logger.info(f"No seed given; using generated seed {fresh}")
    return fresh


def sweep_randomness(
    seed: int, purpose: Purpose, key: Tuple[int, ...], size: int
) -> Tuple[np.ndarray, np.ndarray]:
    """The (edge index, uniform) pairs for one sweep of ``size`` steps."""
    rng = stream(seed, purpose, *key)
    return rng.integers(0, size, size=size), rng.random(size)
