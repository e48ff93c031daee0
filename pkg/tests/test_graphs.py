"""Tests for graph representation, templates and homomorphism counting."""

import math

import numpy as np
import pytest

from ergmlab.errors import DomainError
from ergmlab.graphs import (
    EdgeGraph,
    EdgeId,
    Template,
    add_isolated_vertex,
    aut_count,
    check_identities,
    delete_edge,
    edge_pairs,
    edge_total,
    hom_count,
    pair_index,
    random_template,
    rooted_hom_count,
    rooted_pair_hom_count,
    run_identity_suite,
)
from ergmlab.graphs.identities import random_graph


TRIANGLE = Template.from_name("triangle")
TWO_STAR = Template.from_name("two-star")
EDGE = Template.from_name("edge")


class TestEdgeIndexing:
    """Canonical edge order."""

    def test_lexicographic_order(self):
        assert edge_total(4) == 6
        assert [pair_index(4, i, j) for i, j in edge_pairs(4)] == list(range(6))
        assert edge_pairs(4)[3] == (2, 3)

    def test_pair_index_is_symmetric(self):
        assert pair_index(5, 4, 2) == pair_index(5, 2, 4)

    @pytest.mark.parametrize("i,j", [(1, 1), (0, 2), (2, 6)])
    def test_invalid_pairs(self, i, j):
        with pytest.raises(DomainError):
            pair_index(5, i, j)

    def test_edge_id_from_index(self):
        s = EdgeId.from_index(5, pair_index(5, 2, 4))
        assert s.endpoints == (2, 4)
        with pytest.raises(DomainError):
            EdgeId.from_index(5, 10)


class TestEdgeGraph:
    """Bit-packed graph operations."""

    def test_edges_and_degrees(self):
        g = EdgeGraph.from_edges(4, [(1, 2), (2, 3), (3, 4)])
        assert g.edge_count == 3
        assert g.has_edge(EdgeId.of(4, 3, 2))
        assert not g.has_edge(EdgeId.of(4, 1, 4))
        assert [g.degree(v) for v in range(1, 5)] == [1, 2, 2, 1]

    def test_toggling(self):
        g = EdgeGraph.empty(5)
        s = EdgeId.of(5, 1, 5)
        assert g.with_edge(s).edge_count == 1
        assert g.with_edge(s).without_edge(s) == g
        assert g.is_subgraph_of(g.with_edge(s))

    def test_array_and_hex_forms(self):
        rng = np.random.default_rng(3)
        g = random_graph(rng, 9)
        assert EdgeGraph.from_array(9, g.to_array()) == g
        assert EdgeGraph.parse(g.format()) == g
        assert EdgeGraph.from_hex(9, g.to_hex()) == g

    def test_bits_must_fit(self):
        with pytest.raises(DomainError):
            EdgeGraph(3, 1 << 3)

    def test_malformed_text(self):
        with pytest.raises(DomainError):
            EdgeGraph.parse("5\nzz\n")


class TestTemplate:
    """Template validation and library."""

    def test_named_templates(self):
        assert (TRIANGLE.v, TRIANGLE.e) == (3, 3)
        assert Template.from_name("2star") == TWO_STAR
        assert Template.from_name("square").e == 4

    def test_unknown_name(self):
        with pytest.raises(DomainError, match="Unknown template"):
            Template.from_name("pentagon")

    @pytest.mark.parametrize("v,edges", [
        (3, [(1, 1)]),
        (3, [(1, 2), (2, 1)]),
        (3, [(1, 4)]),
        (1, []),
    ])
    def test_invalid_templates(self, v, edges):
        with pytest.raises(DomainError):
            Template.of(v, edges)

    def test_size_caps_are_explicit(self):
        path = Template.of(10, [(k, k + 1) for k in range(1, 10)])
        path.check_size(10, 9)
        with pytest.raises(DomainError, match="too large"):
            path.check_size(8, 12)
        with pytest.raises(DomainError, match="too large"):
            TRIANGLE.check_size(3, 2)

    def test_text_format(self):
        text = "# path\nv 4\n1 2\n2 3  # middle\n3 4\n"
        template = Template.parse(text)
        assert template == Template.from_name("path3")
        assert Template.parse(template.format()) == template

    def test_deletion_keeps_vertices(self):
        reduced = delete_edge(TRIANGLE, 0)
        assert reduced.v == 3 and reduced.e == 2
        assert not reduced.has_isolated
        assert delete_edge(EDGE, 0).isolated_vertices == (1, 2)

    def test_automorphisms(self):
        assert aut_count(TRIANGLE) == 6
        assert aut_count(TWO_STAR) == 2
        assert aut_count(Template.from_name("square")) == 8


class TestHomCount:
    """Injective homomorphism counts against closed forms."""

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_complete_host(self, n):
        complete = EdgeGraph.complete(n)
        assert hom_count(TRIANGLE, complete) == n * (n - 1) * (n - 2)
        assert hom_count(TWO_STAR, complete) == n * (n - 1) * (n - 2)
        assert hom_count(Template.from_name("path3"), complete) == math.perm(n, 4)

    def test_edge_template_counts_twice(self):
        g = random_graph(np.random.default_rng(1), 8)
        assert hom_count(EDGE, g) == 2 * g.edge_count

    def test_two_star_on_path(self):
        path = EdgeGraph.from_edges(3, [(1, 2), (2, 3)])
        assert hom_count(TWO_STAR, path) == 2
        assert hom_count(TRIANGLE, path) == 0

    def test_isolated_vertex_factor(self):
        g = random_graph(np.random.default_rng(2), 7)
        assert hom_count(add_isolated_vertex(TRIANGLE), g) == 4 * hom_count(TRIANGLE, g)

    def test_template_larger_than_host(self):
        with pytest.raises(DomainError, match="larger than host"):
            hom_count(Template.from_name("square"), EdgeGraph.complete(3))


class TestRootedCount:
    """Edge-rooted and edge-pair-rooted counts."""

    def test_rooted_triangle_in_complete_graph(self):
        s = EdgeId.of(5, 1, 2)
        assert rooted_hom_count(TRIANGLE, EdgeGraph.complete(5), s) == 6 * 3

    def test_rooted_edge(self):
        s = EdgeId.of(4, 2, 4)
        assert rooted_hom_count(EDGE, EdgeGraph.empty(4), s) == 2

    def test_rooted_ignores_presence_of_s(self):
        g = random_graph(np.random.default_rng(5), 7)
        s = EdgeId.of(7, 3, 6)
        assert rooted_hom_count(TWO_STAR, g.with_edge(s), s) == rooted_hom_count(TWO_STAR, g.without_edge(s), s)

    def test_pair_rooted_triangle(self):
        l, r = EdgeId.of(4, 1, 2), EdgeId.of(4, 1, 3)
        assert rooted_pair_hom_count(TRIANGLE, EdgeGraph.complete(4), l, r) == 6
        assert rooted_pair_hom_count(TRIANGLE, EdgeGraph.empty(4), l, r) == 0

    def test_pair_rooting_needs_distinct_edges(self):
        s = EdgeId.of(4, 1, 2)
        with pytest.raises(DomainError):
            rooted_pair_hom_count(TRIANGLE, EdgeGraph.complete(4), s, s)

    def test_rooting_needs_an_edge(self):
        with pytest.raises(DomainError):
            rooted_hom_count(Template.of(2, []), EdgeGraph.complete(4), EdgeId.of(4, 1, 2))


class TestIdentities:
    """Deterministic counting identities."""

    def test_named_templates_pass(self):
        rng = np.random.default_rng(11)
        g = random_graph(rng, 7)
        for name in ("edge", "two-star", "triangle", "path3", "square", "three-star"):
            assert check_identities(g, Template.from_name(name), rng) == []

    def test_random_suite(self):
        assert run_identity_suite(7, 40, np.random.default_rng(0)) == []

    def test_random_template_shape(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            template = random_template(rng, max_v=4)
            assert 2 <= template.v <= 4
            assert template.e >= 1

    @pytest.mark.slow
    def test_acceptance_suite(self):
        assert run_identity_suite(12, 1000, np.random.default_rng(1)) == []
