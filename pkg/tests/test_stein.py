"""Tests for the Stein-quantity estimators."""

import numpy as np
import pytest

from ergmlab.curie_weiss import cw_family
from ergmlab.errors import PreconditionError
from ergmlab.model import ErgmSpec
from ergmlab.stein import (
    TiltedFamily,
    batch_mean,
    batch_sd,
    delta1_i,
    delta2_i,
    diagnostic_delta1,
    ergm_family,
    estimate_all,
    estimate_b,
    estimate_delta2,
    estimate_delta3,
    exact_stein_quantities,
    transfer_check,
)


def within(estimate, target, k=4.0, floor=1e-3):
    return abs(estimate.value - target) <= k * estimate.se + floor


class TestBatchStatistics:
    def test_batch_mean(self):
        values = np.random.default_rng(0).normal(3.0, 1.0, size=5000)
        estimate = batch_mean(values)
        assert estimate.value == pytest.approx(values.mean())
        assert 0.005 < estimate.se < 0.03

    def test_batch_sd(self):
        values = np.random.default_rng(1).normal(0.0, 2.0, size=5000)
        assert within(batch_sd(values), 2.0, k=5.0)


class TestErgmFamily:
    """Edge statistic of a small ERGM, checked against enumeration."""

    def test_edge_only_b_is_one(self):
        family = ergm_family(ErgmSpec.named([("edge", 0.2)]), 4)
        exact = exact_stein_quantities(family)
        assert exact["b"] == pytest.approx(1.0, abs=1e-12)
        estimate, warnings = estimate_b(family, 4000, 1, np.random.default_rng(2))
        assert within(estimate, 1.0)
        assert warnings == []

    def test_monte_carlo_matches_exact(self, edge_triangle):
        family = ergm_family(edge_triangle, 4)
        result = estimate_all(family, 6000, None, np.random.default_rng(3))
        exact = result.exact
        assert exact is not None and result.fast_path
        assert within(result.b, exact["b"])
        assert within(result.delta2, exact["delta2"])
        assert within(result.delta3, exact["delta3"])

    def test_separate_estimators_match_exact(self, edge_triangle):
        family = ergm_family(edge_triangle, 4)
        exact = exact_stein_quantities(family)
        delta2 = estimate_delta2(family, 4000, 1, np.random.default_rng(10))
        delta3 = estimate_delta3(family, exact["b"], 4000, 1, np.random.default_rng(11))
        assert within(delta2, exact["delta2"], k=3.0, floor=1e-4)
        assert within(delta3, exact["delta3"], k=3.0, floor=1e-4)

    def test_pilot_mean_is_reproducible(self, edge_triangle):
        first = ergm_family(edge_triangle, 8, pilot_draws=40, seed=5)
        second = ergm_family(edge_triangle, 8, pilot_draws=40, seed=5)
        assert first.metadata["mu_source"] == "pilot (40 draws)"
        assert first.metadata["mu"] == second.metadata["mu"]

    def test_resampling_needs_a_generator(self, edge_triangle):
        family = ergm_family(edge_triangle, 4)
        x = np.zeros(6, dtype=np.int8)
        with pytest.raises(PreconditionError):
            delta1_i(family, x, 0, 10, use_fast_path=False)
        with pytest.raises(PreconditionError):
            delta2_i(family, x, 0, 10, use_fast_path=False)

    def test_transfer_identity(self, edge_triangle):
        family = ergm_family(edge_triangle, 4)
        direct, weighted = transfer_check(family, lambda rows: rows.sum(axis=1) ** 2)
        assert direct == pytest.approx(weighted, abs=1e-10)

    def test_fast_path_matches_resampling(self, edge_triangle):
        family = ergm_family(edge_triangle, 4)
        x = np.array([1, 0, 1, 1, 0, 1], dtype=np.int8)
        rng = np.random.default_rng(4)
        for i in (0, 4):
            fast = delta1_i(family, x, i, 1)
            slow = delta1_i(family, x, i, 40000, rng, use_fast_path=False)
            assert slow == pytest.approx(fast, rel=0.05)

    def test_too_few_outer_draws(self, edge_triangle):
        family = ergm_family(edge_triangle, 4)
        with pytest.raises(PreconditionError):
            estimate_all(family, 3, 1, np.random.default_rng(0))

    def test_diagnostics_are_not_certified(self, edge_triangle):
        family = ergm_family(edge_triangle, 4)
        report = diagnostic_delta1(family, 60, np.random.default_rng(5), inner_draws=20)
        assert report["certified"] is False
        assert {"delta1", "delta1_prime", "terms", "importance_ess"} <= set(report)
        assert report["delta1"] >= 0


class TestCurieWeissFamily:
    """Curie-Weiss has b = 1 - beta and a constant Delta_1 sum."""

    @pytest.mark.parametrize("beta", [0.2, 0.5])
    def test_exact_quantities(self, beta):
        exact = exact_stein_quantities(cw_family(8, beta))
        assert exact["b"] == pytest.approx(1.0 - beta, abs=1e-12)
        assert exact["delta2"] <= 1e-12

    def test_monte_carlo_b(self):
        result = estimate_all(cw_family(50, 0.4), 2000, 1, np.random.default_rng(6))
        assert result.b.value == pytest.approx(0.6, abs=1e-12)
        assert result.delta2.value <= 1e-12

    def test_transfer_identity(self):
        family = cw_family(6, 0.3)
        direct, weighted = transfer_check(family, lambda rows: np.abs(rows.sum(axis=1)))
        assert direct == pytest.approx(weighted, abs=1e-10)

    def test_resampled_deltas_match_closed_form(self):
        family = cw_family(6, 0.5)
        x = np.array([1, 1, 1, 1, -1, 1], dtype=np.int8)
        rng = np.random.default_rng(7)
        fast1 = delta1_i(family, x, 0, 1)
        fast2 = delta2_i(family, x, 0, 1)
        assert delta1_i(family, x, 0, 20000, rng, use_fast_path=False) == pytest.approx(fast1, rel=0.05)
        assert delta2_i(family, x, 0, 20000, rng, use_fast_path=False) == pytest.approx(fast2, rel=0.05)

    def test_large_family_has_no_enumeration(self):
        with pytest.raises(PreconditionError):
            transfer_check(cw_family(40, 0.3), lambda rows: rows.sum(axis=1))

    def test_delta3_is_small(self):
        result = estimate_all(cw_family(100, 0.5), 2000, 1, np.random.default_rng(8))
        assert 0.0 < result.delta3.value < 0.05


class TestClosedForms:
    def test_edge_statistic_delta1(self):
        spec = ErgmSpec.named([("edge", 0.4)])
        family = ergm_family(spec, 4)
        p, sigma_sq = family.metadata["p"], family.metadata["sigma_sq"]
        x = np.array([1, 0, 0, 1, 0, 0], dtype=np.int8)
        assert delta1_i(family, x, 0, 1) == pytest.approx((1 - p) / (2 * sigma_sq), rel=1e-12)
        assert delta1_i(family, x, 1, 1) == pytest.approx(p / (2 * sigma_sq), rel=1e-12)

    def test_half_density_has_no_delta2(self):
        family = ergm_family(ErgmSpec.named([("edge", 0.0)]), 5)
        result = estimate_all(family, 400, 1, np.random.default_rng(9))
        assert result.delta2.value == pytest.approx(0.0, abs=1e-12)
        assert result.b.value == pytest.approx(1.0, abs=1e-12)

    def test_vanishing_b_is_reported(self):
        def alternating(rng, count):
            return (np.arange(count)[:, None] % 2 == 0).repeat(3, axis=1).astype(np.int8)

        family = TiltedFamily(
            name="balanced",
            dimension=3,
            baseline=alternating,
            f=lambda rows: np.atleast_2d(rows).sum(axis=1) - 1.5,
            g=lambda rows: np.zeros(len(np.atleast_2d(rows))),
            tilted=alternating,
            d_star=1.0,
            delta1_fast=lambda rows: np.atleast_2d(rows) - 0.5,
        )
        estimate, warnings = estimate_b(family, 40, 1, np.random.default_rng(0))
        assert estimate.value == 0.0
        assert len(warnings) == 1 and "b ~ 0" in warnings[0]
