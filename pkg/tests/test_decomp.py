"""Tests for Hoeffding terms, product expansions and residual scans."""

import itertools

import numpy as np
import pytest

from ergmlab.decomp import (
    HoeffdingTerm,
    MomentContext,
    centering_check,
    completed_expansion,
    expand_product,
    g_I,
    moment_context_from_measure,
    moment_context_from_samples,
    residual_variance_scan,
    set_partitions,
)
from ergmlab.errors import DomainError, MissingMomentError, NotSubcriticalError
from ergmlab.graphs import EdgeGraph, Template
from ergmlab.model import ErgmSpec
from ergmlab.oracle import build


def all_binary_rows(width):
    return np.array(list(itertools.product((0, 1), repeat=width)), dtype=float)


class TestSetPartitions:
    @pytest.mark.parametrize("size,bell", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15)])
    def test_bell_numbers(self, size, bell):
        assert len(set_partitions(size)) == bell

    def test_blocks_cover_the_set(self):
        for partition in set_partitions(4):
            assert sorted(k for block in partition for k in block) == [0, 1, 2, 3]


class TestProductExpansion:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_polynomial_identity(self, m):
        edges = list(range(m))
        expansion = expand_product(edges, 0.37)
        rows = all_binary_rows(m)
        assert np.allclose(expansion.polynomial(rows), rows.prod(axis=1), atol=1e-12)

    def test_coefficient_count(self):
        assert len(expand_product([2, 5, 7], 0.4).terms) == 7

    def test_completion_is_exact_under_independence(self):
        measure = build(ErgmSpec.named([("edge", 0.25)]), 4)
        edges = [0, 2, 5]
        context = moment_context_from_measure(measure, edges)
        result = completed_expansion(edges, context, measure.indicators)
        assert result["max_abs_residual"] < 1e-12


class TestHoeffdingTerm:
    """Centering of g_I under the enumerated law."""

    def test_low_orders_are_centered(self, edge_triangle):
        measure = build(edge_triangle, 4)
        check = centering_check(measure, [0, 1, 2, 5], max_order=3)
        assert check["max_abs_mean"] < 1e-9
        assert "0,1,2" in check["means"]

    def test_amended_order_four_is_centered(self, edge_triangle):
        measure = build(edge_triangle, 4)
        check = centering_check(measure, [0, 1, 2, 5], max_order=4, multiplicity="amended")
        assert check["max_abs_mean"] < 1e-9

    def test_original_order_four_is_not_centered(self, edge_triangle):
        measure = build(edge_triangle, 4)
        check = centering_check(measure, [0, 1, 2, 5], max_order=4, multiplicity="original")
        assert abs(check["means"]["0,1,2,5"]) > 1e-10

    def test_multiplicity_from_config(self, edge_triangle):
        context = moment_context_from_measure(build(edge_triangle, 4), [0, 1])
        assert HoeffdingTerm((0, 1), context).multiplicity == "amended"
        with pytest.raises(DomainError):
            HoeffdingTerm((0, 1), context, multiplicity="other")

    def test_missing_moment(self):
        context = MomentContext(0.5, {frozenset({0}): 0.0, frozenset({1}): 0.0}, "manual")
        with pytest.raises(MissingMomentError) as info:
            HoeffdingTerm((0, 1), context)
        assert info.value.missing == [(0, 1)]

    @pytest.mark.parametrize("edges", [(), (0, 0), (0, 1, 2, 3, 4)])
    def test_index_set_errors(self, edges):
        context = MomentContext(0.5, {}, "manual")
        with pytest.raises(DomainError):
            HoeffdingTerm(edges, context)

    def test_single_edge_is_centered_indicator(self, edge_triangle):
        measure = build(edge_triangle, 4)
        context = moment_context_from_measure(measure, [3])
        g = EdgeGraph.complete(4)
        assert g_I(HoeffdingTerm((3,), context), g) == pytest.approx(1.0 - context.p_tilde)

    def test_sample_moments_carry_errors(self):
        rows = np.random.default_rng(0).integers(0, 2, size=(500, 6))
        context = moment_context_from_samples(rows, [0, 1, 2])
        assert context.p_tilde == pytest.approx(rows.mean())
        assert set(context.se) == set(context.moments)
        assert context.source.startswith("monte-carlo")


class TestResidualScan:
    def test_small_scan(self, edge_triangle):
        result = residual_variance_scan(
            edge_triangle, Template.from_name("two-star"), [5, 6, 7], 150, seed=3
        )
        assert [row["n"] for row in result["rows"]] == [5, 6, 7]
        assert result["predicted_raw_slope"] == 4
        assert result["predicted_residual_slope"] == 3
        for row in result["rows"]:
            assert 0 < row["residual_variance"]

    def test_edge_template_has_constant_residual(self, edge_triangle):
        result = residual_variance_scan(
            edge_triangle, Template.from_name("edge"), [5, 6, 7], 100, seed=4
        )
        assert result["residual_slope"] is None
        assert result["slope_gap"] is None

    def test_needs_three_sizes(self, edge_triangle):
        with pytest.raises(DomainError):
            residual_variance_scan(edge_triangle, Template.from_name("triangle"), [5, 6], 50, seed=1)

    def test_needs_subcritical_model(self):
        spec = ErgmSpec.named([("edge", -1.5), ("triangle", 1.5)])
        with pytest.raises(NotSubcriticalError):
            residual_variance_scan(spec, Template.from_name("triangle"), [5, 6, 7], 50, seed=1)

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["two-star", "triangle"])
    def test_acceptance_slope_gap(self, name):
        spec = ErgmSpec.named([("edge", -0.1), ("triangle", 0.05)])
        result = residual_variance_scan(spec, Template.from_name(name), [20, 40, 80], 5000, seed=11)
        assert result["slope_gap"] >= 0.4
