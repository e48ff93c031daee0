"""Tests for the exhaustive-enumeration oracle."""

import math

import numpy as np
import pytest
from scipy import stats
from scipy.special import expit

from ergmlab.errors import DomainError, ExactSizeError
from ergmlab.graphs import EdgeGraph, EdgeId, Template, hom_count
from ergmlab.model import ErgmSpec, cond_log_odds, solve_fixed_point
from ergmlab.oracle import build, exact_W_law, exact_conditional


@pytest.fixture
def edge_only():
    return ErgmSpec.named([("edge", 0.3)])


class TestBuild:
    def test_size_cap(self, edge_triangle):
        with pytest.raises(ExactSizeError):
            build(edge_triangle, 7)

    def test_template_must_fit(self):
        with pytest.raises(DomainError):
            build(ErgmSpec.named([("edge", 0.0), ("square", 0.1)]), 3)

    def test_probabilities(self, edge_triangle):
        measure = build(edge_triangle, 4)
        assert measure.states == 64
        assert measure.probs.sum() == pytest.approx(1.0, abs=1e-14)

    def test_two_accumulation_orders_agree(self, edge_triangle):
        measure = build(edge_triangle, 5)
        assert measure.log_partition_pairwise() == pytest.approx(measure.log_Z, abs=1e-12)


class TestEdgeOnlyModel:
    """With only the edge term the law is Bernoulli(p)^N."""

    def test_partition_function(self, edge_only):
        measure = build(edge_only, 4)
        assert measure.log_Z == pytest.approx(6 * math.log1p(math.exp(0.6)), abs=1e-12)

    def test_edge_count_is_binomial(self, edge_only):
        measure = build(edge_only, 5)
        p = solve_fixed_point(edge_only).p
        expected = stats.binom.pmf(np.arange(11), 10, p)
        assert np.allclose(measure.edge_count_law(), expected, atol=1e-12)
        assert measure.mean_edges == pytest.approx(10 * p, abs=1e-12)

    def test_conditionals_are_independent(self, edge_only):
        measure = build(edge_only, 4)
        p = solve_fixed_point(edge_only).p
        s, r = EdgeId.of(4, 1, 2), EdgeId.of(4, 3, 4)
        assert exact_conditional(measure, s, {r: 1}) == pytest.approx(p, abs=1e-12)
        assert exact_conditional(measure, s) == pytest.approx(p, abs=1e-12)


class TestQueries:
    def test_marginals_are_exchangeable(self, edge_triangle):
        measure = build(edge_triangle, 4)
        marginals = [measure.marginal(EdgeId.from_index(4, k)) for k in range(6)]
        assert np.allclose(marginals, marginals[0], atol=1e-14)
        assert measure.mean_edges == pytest.approx(6 * marginals[0], abs=1e-12)

    def test_expect_matches_hom_moments(self, edge_triangle):
        measure = build(edge_triangle, 4)
        triangle = Template.from_name("triangle")
        first, second = measure.hom_moments(1)
        assert measure.expect(lambda g: hom_count(triangle, g)) == pytest.approx(first, rel=1e-12)
        assert second >= first ** 2

    def test_positive_interaction_raises_conditionals(self, edge_triangle):
        measure = build(edge_triangle, 4)
        s, a, b = EdgeId.of(4, 1, 2), EdgeId.of(4, 1, 3), EdgeId.of(4, 2, 3)
        closed = exact_conditional(measure, s, {a: 1, b: 1})
        open_ = exact_conditional(measure, s, {a: 0, b: 0})
        assert closed > open_

    def test_condition_errors(self, edge_triangle):
        measure = build(edge_triangle, 4)
        s, r = EdgeId.of(4, 1, 2), EdgeId.of(4, 1, 3)
        with pytest.raises(DomainError, match="Contradictory"):
            exact_conditional(measure, s, [(r, 1), (r, 0)])
        with pytest.raises(DomainError):
            exact_conditional(measure, s, {s: 1})
        with pytest.raises(DomainError):
            exact_conditional(measure, s, {r: 2})

    def test_total_variation(self, edge_triangle):
        measure = build(edge_triangle, 4)
        assert measure.total_variation(measure.edge_count_law() * 1e6) == pytest.approx(0.0, abs=1e-12)
        assert measure.total_variation(np.full(7, 1.0)) > 0

    def test_exact_draws(self, edge_triangle):
        measure = build(edge_triangle, 4)
        draws = measure.draw(4000, np.random.default_rng(0))
        counts = np.array([g.edge_count for g in draws])
        assert measure.total_variation(counts) < 0.05

    def test_w_law_is_centered(self, edge_triangle):
        measure = build(edge_triangle, 5)
        report = solve_fixed_point(edge_triangle)
        law = exact_W_law(measure, report.sigma_sq(5))
        assert law.mean == pytest.approx(0.0, abs=1e-12)
        assert 0.0 <= law.kolmogorov() <= 1.0

    def test_to_dict(self, edge_triangle):
        data = build(edge_triangle, 4).to_dict()
        assert {"log_Z", "mu", "edge_count_law", "hom_moments"} <= set(data)

    def test_full_condition_gives_heat_bath_probability(self, edge_triangle):
        measure = build(edge_triangle, 4)
        g = EdgeGraph.from_edges(4, [(1, 3), (2, 3), (3, 4)])
        s = EdgeId.of(4, 1, 2)
        rest = {EdgeId.from_index(4, k): int(g.has_edge(EdgeId.from_index(4, k)))
                for k in range(6) if k != s.index}
        expected = float(expit(cond_log_odds(edge_triangle, g, s)))
        assert exact_conditional(measure, s, rest) == pytest.approx(expected, abs=1e-12)

    def test_dependence_shrinks_with_interaction(self):
        s, r = EdgeId.of(4, 1, 2), EdgeId.of(4, 1, 3)
        gaps = []
        for beta2 in (0.2, 0.1, 0.05):
            measure = build(ErgmSpec.named([("edge", -0.2), ("triangle", beta2)]), 4)
            gaps.append(abs(exact_conditional(measure, s, {r: 1}) - measure.marginal(s)))
        assert gaps[0] > gaps[1] > gaps[2] > 0
