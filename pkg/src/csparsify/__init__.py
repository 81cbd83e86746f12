"""Sparsification of binary constraint satisfaction problems.

A binary predicate admits near-linear size sparsifiers exactly when no 2x2
restriction of it has a single supported cell. For such predicates an
instance is lifted to the bipartite double cover of its constraint graph,
where its value becomes a multi-way cut value, and a cut sparsifier of the
cover is pulled back.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .predicates import (
    BUILTINS,
    Classification,
    CubeWitness,
    KaryPredicate,
    SingletonWitness,
    classify,
    cut,
    find_singleton_lcube,
    find_singleton_subpredicate,
    find_unused_label,
    is_singleton,
    make_builtin,
    nae,
    nor,
    parity,
    restrict,
)
from .csp import (
    DEFAULT_MAX_BRUTEFORCE,
    Constraint,
    CspInstance,
    KUniformHypergraph,
    WeightedGraph,
    all_values,
    enumerate_assignments,
    graph_of,
    hypergraph_of,
    instance_of,
    satisfied,
    value,
)
from .covers import (
    Colouring,
    CoverMap,
    auxiliary_graph,
    biclique_colouring,
    bipartite_complement,
    bipartite_double_cover,
    complement_components,
    connected_components,
    k_fold_cover,
    labels_from_partition,
    lift_assignment,
    nor_lift,
    partition_from_labels,
    prune_isolated,
)
from .sparsifier import (
    SparsifierReport,
    VerificationResult,
    cut_value,
    lcut_value,
    lcut_value_labels,
    pull_back,
    sparsify_csp,
    sparsify_cut,
    sparsify_language,
    verify_cut_sparsifier,
    verify_sparsifier,
)
from .hardness import (
    LowerBoundCertificate,
    cube_hypergraph,
    cube_instance,
    exhaustive_family,
    grid_instance,
    hitting_lower_bound,
    minimum_hitting_set,
    unused_label_bound,
)
