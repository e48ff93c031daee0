"""Tests for random streams, Glauber dynamics and coupling from the past."""

import numpy as np
import pytest

from ergmlab.errors import CoalescenceTimeoutError, DomainError, ExactSizeError, UnsupportedRegimeError
from ergmlab.graphs import EdgeGraph
from ergmlab.model import ErgmSpec
from ergmlab.oracle import build
from ergmlab.sampling import (
    ChainState,
    Purpose,
    cftp_draws,
    cftp_sample,
    default_burn_in_sweeps,
    effective_sample_size,
    er_sample,
    glauber_kernel,
    glauber_step,
    iter_chain,
    resolve_seed,
    run_sweeps,
    sample,
    sample_replicates,
    stream,
)


class TestStreams:
    """Counter-based generators."""

    def test_same_key_same_numbers(self):
        a = stream(42, Purpose.CHAIN, 0, 3).random(5)
        b = stream(42, Purpose.CHAIN, 0, 3).random(5)
        assert np.array_equal(a, b)

    def test_keys_are_independent(self):
        a = stream(42, Purpose.CHAIN, 0, 3).random(5)
        assert not np.array_equal(a, stream(42, Purpose.CHAIN, 0, 4).random(5))
        assert not np.array_equal(a, stream(42, Purpose.CFTP, 0, 3).random(5))

    def test_resolve_seed(self):
        assert resolve_seed(7) == 7
        generated = resolve_seed(None)
        assert isinstance(generated, int) and generated >= 0


class TestGlauber:
    """Single-edge heat-bath dynamics."""

    def test_kernel_detailed_balance(self, edge_triangle):
        kernel = glauber_kernel(edge_triangle, 3)
        pi = build(edge_triangle, 3).probs
        assert np.allclose(kernel.sum(axis=1), 1.0, atol=1e-14)
        flow = pi[:, None] * kernel
        assert np.max(np.abs(flow - flow.T)) < 1e-12

    def test_kernel_stationary_at_four(self, edge_triangle):
        kernel = glauber_kernel(edge_triangle, 4)
        pi = build(edge_triangle, 4).probs
        assert np.max(np.abs(pi @ kernel - pi)) < 1e-12

    def test_kernel_size_cap(self, edge_triangle):
        with pytest.raises(ExactSizeError):
            glauber_kernel(edge_triangle, 5)

    def test_steps_match_sweeps(self, edge_triangle):
        one = ChainState.start(EdgeGraph.empty(5), seed=3)
        two = ChainState.start(EdgeGraph.empty(5), seed=3)
        run_sweeps(edge_triangle, one, 2)
        for _ in range(20):
            glauber_step(edge_triangle, two)
        assert one.snapshot() == two.snapshot()
        assert one.steps == two.steps == 20

    def test_reproducible(self, edge_triangle):
        first = sample(edge_triangle, 6, 2, 1, 30, seed=5)
        again = sample(edge_triangle, 6, 2, 1, 30, seed=5)
        other = sample(edge_triangle, 6, 2, 1, 30, seed=5, chain_id=1)
        assert first.graphs == again.graphs
        assert first.graphs != other.graphs
        assert first.metadata["seed"] == 5
        assert first.metadata["burn_in_sweeps"] == 2

    def test_iter_chain_rejects_zero_thinning(self, edge_triangle):
        with pytest.raises(DomainError):
            list(iter_chain(edge_triangle, 5, 1, 0, 3, seed=1))

    def test_default_burn_in(self):
        # ceil(100 log 10) = 231 updates over 45 pairs
        assert default_burn_in_sweeps(10) == 6

    def test_matches_exact_law(self, edge_triangle):
        run = sample(edge_triangle, 4, 20, 2, 6000, seed=17)
        measure = build(edge_triangle, 4)
        assert measure.total_variation(run.edge_counts) < 0.05

    def test_replicates_in_chain_order(self, edge_triangle):
        runs = sample_replicates(edge_triangle, 5, 2, 1, 10, chains=3, seed=9, workers=1)
        assert [r.metadata["chain_id"] for r in runs] == [0, 1, 2]
        assert runs[1].graphs == sample(edge_triangle, 5, 2, 1, 10, seed=9, chain_id=1).graphs

    def test_worker_count_does_not_change_output(self, edge_triangle):
        serial = sample_replicates(edge_triangle, 5, 2, 1, 10, chains=2, seed=9, workers=1)
        parallel = sample_replicates(edge_triangle, 5, 2, 1, 10, chains=2, seed=9, workers=2)
        assert [r.graphs for r in serial] == [r.graphs for r in parallel]

    @pytest.mark.slow
    def test_acceptance_glauber_tv(self):
        spec = ErgmSpec.named([("edge", -0.2), ("triangle", 0.1)])
        run = sample(spec, 4, 100, 1, 1_000_000 // 6, seed=2)
        assert build(spec, 4).total_variation(run.edge_counts) <= 0.02


class TestEffectiveSampleSize:
    def test_independent_trace(self):
        trace = np.random.default_rng(0).normal(size=4000)
        assert effective_sample_size(trace) > 1000

    def test_constant_trace(self):
        assert effective_sample_size(np.ones(100)) == 100.0

    def test_sticky_trace_is_penalized(self):
        trace = np.repeat(np.random.default_rng(1).normal(size=40), 50)
        assert effective_sample_size(trace) < 400


class TestCftp:
    """Perfect sampling."""

    def test_exact_draws_match_enumeration(self, edge_triangle):
        draws = cftp_draws(edge_triangle, 4, 3000, seed=21)
        counts = np.array([g.edge_count for g in draws])
        assert build(edge_triangle, 4).total_variation(counts) < 0.05

    def test_draws_are_reproducible(self, edge_triangle):
        assert cftp_sample(edge_triangle, 5, 4, draw=2) == cftp_sample(edge_triangle, 5, 4, draw=2)

    def test_negative_interaction_unsupported(self):
        spec = ErgmSpec.named([("edge", 0.0), ("triangle", -0.1)], allow_nonpositive=True)
        with pytest.raises(UnsupportedRegimeError):
            cftp_sample(spec, 4, 1)

    def test_timeout_carries_diagnostics(self, edge_triangle):
        # one sweep of 28 updates cannot touch all 28 pairs
        with pytest.raises(CoalescenceTimeoutError) as info:
            cftp_sample(edge_triangle, 8, 1, max_sweeps=1)
        assert info.value.diagnostics["horizon_sweeps"] == 1
        assert info.value.diagnostics["disagreements"] > 0

    @pytest.mark.slow
    def test_acceptance_cftp_tv(self):
        spec = ErgmSpec.named([("edge", -0.2), ("triangle", 0.1)])
        counts = np.array([g.edge_count for g in cftp_draws(spec, 4, 100_000, seed=3)])
        assert build(spec, 4).total_variation(counts) <= 0.02


class TestErdosRenyi:
    def test_bounds(self):
        with pytest.raises(DomainError):
            er_sample(5, 1.5, seed=1)

    def test_extremes(self):
        assert er_sample(6, 1.0, seed=1) == EdgeGraph.complete(6)
        assert er_sample(6, 0.0, seed=1) == EdgeGraph.empty(6)

    def test_mean_edge_count(self):
        counts = np.array([er_sample(50, 0.3, seed=4, draw=k).edge_count for k in range(200)])
        size = 50 * 49 // 2
        sd = np.sqrt(size * 0.3 * 0.7 / len(counts))
        assert abs(counts.mean() - 0.3 * size) <= 3 * sd

    def test_draws_differ_by_counter(self):
        assert er_sample(20, 0.5, seed=4, draw=0) != er_sample(20, 0.5, seed=4, draw=1)
        assert er_sample(20, 0.5, seed=4, draw=1) == er_sample(20, 0.5, seed=4, draw=1)
