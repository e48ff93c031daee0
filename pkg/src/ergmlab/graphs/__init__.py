"""
Graph representation and exact injective homomorphism counting.
"""

from .counting import (
    hom_count,
    hom_count_adjacency,
    rooted_count_adjacency,
    rooted_hom_count,
    rooted_pair_hom_count,
)
from .edge_graph import EdgeGraph, EdgeId, MutableGraph, edge_pairs, edge_total, pair_index
from .identities import check_identities, random_template, run_identity_suite
from .template import (
    NAMED_TEMPLATES,
    Template,
    add_isolated_vertex,
    aut_count,
    delete_edge,
    is_single_edge,
)

__all__ = [
    'EdgeGraph',
    'EdgeId',
    'MutableGraph',
    'Template',
    'NAMED_TEMPLATES',
    'edge_pairs',
    'edge_total',
    'pair_index',
    'hom_count',
    'hom_count_adjacency',
    'rooted_count_adjacency',
    'rooted_hom_count',
    'rooted_pair_hom_count',
    'delete_edge',
    'add_isolated_vertex',
    'aut_count',
    'is_single_edge',
    'check_identities',
    'random_template',
    'run_identity_suite',
]
