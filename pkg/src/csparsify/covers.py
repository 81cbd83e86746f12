"""Graph transformations behind the reduction to cut sparsification.

Vertex numbering conventions:

* cover graphs are layer-major, copy ``t`` of original vertex ``v`` is
  ``t * n + v``;
* the support graph of a predicate on ``[r] x [s]`` puts left label ``i`` at
  vertex ``i`` and right label ``j`` at vertex ``r + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .csp import KUniformHypergraph, WeightedGraph
from .errors import (
    BadParameters,
    InternalBicliqueViolation,
    NotAPartition,
    NotBinary,
    NotBipartite,
    NotSingleton,
    NotSparsifiable,
)
from .predicates import KaryPredicate, find_singleton_subpredicate


class UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # keep the smaller id as root so component order is stable
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def groups(self):
        out = {}
        for x in range(len(self.parent)):
            out.setdefault(self.find(x), []).append(x)
        return sorted(out.values(), key=lambda g: g[0])


@dataclass(frozen=True)
class CoverMap:
    n: int
    k: int = 2

    def forward(self, v: int, layer: int) -> int:
        if not (0 <= v < self.n and 0 <= layer < self.k):
            raise BadParameters(f"no cover vertex for ({v}, {layer})")
        return layer * self.n + v

    def backward(self, x: int) -> tuple[int, int]:
        if not 0 <= x < self.n * self.k:
            raise BadParameters(f"cover vertex {x} out of range")
        return x % self.n, x // self.n

    @property
    def size(self) -> int:
        return self.n * self.k


def bipartite_double_cover(g: WeightedGraph) -> tuple[WeightedGraph, CoverMap]:
    """Edge ``(u, v, w)`` becomes the undirected edge ``{u^0, v^1}`` of weight ``w``."""
    m = CoverMap(g.n, 2)
    edges = tuple((m.forward(u, 0), m.forward(v, 1), w) for u, v, w in g.edges)
    left = frozenset(range(g.n))
    right = frozenset(range(g.n, 2 * g.n))
    return WeightedGraph(2 * g.n, edges, directed=False, bipartition=(left, right)), m


def k_fold_cover(h: KUniformHypergraph, k: Optional[int] = None) -> tuple[KUniformHypergraph, CoverMap]:
    if k is not None and k != h.k:
        raise BadParameters(f"hypergraph is {h.k}-uniform, not {k}-uniform")
    m = CoverMap(h.n, h.k)
    edges = tuple((tuple(m.forward(v, i) for i, v in enumerate(e)), w) for e, w in h.edges)
    return KUniformHypergraph(h.n * h.k, h.k, edges), m


def auxiliary_graph(pred: KaryPredicate) -> WeightedGraph:
    """Bipartite support graph: left label i joined to right label j iff P(i, j) = 1."""
    if pred.arity != 2:
        raise NotBinary(f"support graphs need a binary predicate, got arity {pred.arity}")
    r, s = pred.domains
    edges = tuple((i, r + j, 1.0) for i, j in pred.sorted_support())
    return WeightedGraph(r + s, edges, directed=False,
                         bipartition=(frozenset(range(r)), frozenset(range(r, r + s))))


def bipartite_complement(g: WeightedGraph) -> WeightedGraph:
    if g.bipartition is None:
        raise NotBipartite("the graph carries no bipartition")
    left, right = g.bipartition
    present = {frozenset((u, v)) for u, v, _ in g.edges}
    edges = tuple((u, v, 1.0) for u in sorted(left) for v in sorted(right) if frozenset((u, v)) not in present)
    return WeightedGraph(g.n, edges, directed=False, bipartition=g.bipartition)


def connected_components(g: WeightedGraph) -> list[list[int]]:
    """Components ordered by their smallest vertex."""
    uf = UnionFind(g.n)
    for u, v, _ in g.edges:
        uf.union(u, v)
    return uf.groups()


@dataclass(frozen=True)
class Colouring:
    colour_count: int
    left_colours: tuple[int, ...]
    right_colours: tuple[int, ...]

    def satisfies(self, pred: KaryPredicate) -> bool:
        """Colours differ exactly on supported cells."""
        r, s = pred.domains
        if (r, s) != (len(self.left_colours), len(self.right_colours)):
            return False
        for i in range(r):
            for j in range(s):
                differ = self.left_colours[i] != self.right_colours[j]
                if differ != ((i, j) in pred.support):
                    return False
        return True


def complement_components(pred: KaryPredicate) -> list[tuple[list[int], list[int]]]:
    """Components of the complement of the support graph as (left labels, right labels)."""
    r = pred.domains[0]
    comp = bipartite_complement(auxiliary_graph(pred))
    return [([x for x in group if x < r], [x - r for x in group if x >= r])
            for group in connected_components(comp)]


def biclique_colouring(pred: KaryPredicate) -> Colouring:
    if pred.arity != 2:
        raise NotBinary(f"colourings need a binary predicate, got arity {pred.arity}")
    witness = find_singleton_subpredicate(pred)
    if witness is not None:
        raise NotSparsifiable(f"predicate has a singleton 2x2 restriction: {witness}")
    r, s = pred.domains
    comps = complement_components(pred)
    left = [0] * r
    right = [0] * s
    for colour, (ls, rs) in enumerate(comps):
        if ls and rs:
            # every left/right pair inside the component must be a non-edge of the support graph
            inside = sum(1 for i in ls for j in rs if (i, j) not in pred.support)
            if inside != len(ls) * len(rs):
                raise InternalBicliqueViolation(f"component {ls} x {rs} is not complete bipartite")
        for i in ls:
            left[i] = colour
        for j in rs:
            right[j] = colour
    return Colouring(len(comps), tuple(left), tuple(right))


def lift_assignment(assignment: Sequence[int], colouring: Colouring, cover: CoverMap) -> list[Optional[int]]:
    """Colour every cover vertex: layer 0 through the left colours, layer 1 through the right ones.

    With different left and right domains a label may have no colour on one
    side; that copy gets ``None`` and is always isolated in the cover.
    """
    if cover.k != 2 or len(assignment) != cover.n:
        raise BadParameters("assignment does not match the double cover")
    out: list[Optional[int]] = [None] * cover.size
    r, s = len(colouring.left_colours), len(colouring.right_colours)
    for v, x in enumerate(assignment):
        if x < r:
            out[cover.forward(v, 0)] = colouring.left_colours[x]
        if x < s:
            out[cover.forward(v, 1)] = colouring.right_colours[x]
    return out


def prune_isolated(g: WeightedGraph) -> tuple[WeightedGraph, list[int]]:
    """Drop degree-zero vertices; ``kept[i]`` is the old index of new vertex ``i``."""
    deg = g.degrees()
    kept = [v for v in range(g.n) if deg[v] > 0]
    index = {v: i for i, v in enumerate(kept)}
    edges = tuple((index[u], index[v], w) for u, v, w in g.edges)
    bip = None
    if g.bipartition is not None:
        bip = tuple(frozenset(index[v] for v in side if v in index) for side in g.bipartition)
    return WeightedGraph(len(kept), edges, directed=g.directed, bipartition=bip), kept


def partition_from_labels(labels: Sequence[int], parts: int) -> list[set[int]]:
    out = [set() for _ in range(parts)]
    for v, x in enumerate(labels):
        if not 0 <= x < parts:
            raise NotAPartition(f"label {x} of vertex {v} outside [{parts}]")
        out[x].add(v)
    return out


def labels_from_partition(parts: Sequence[set[int]], n: int) -> list[int]:
    labels = [-1] * n
    for j, part in enumerate(parts):
        for v in part:
            if not 0 <= v < n or labels[v] != -1:
                raise NotAPartition(f"vertex {v} missing from range or in two parts")
            labels[v] = j
    if -1 in labels:
        raise NotAPartition(f"vertex {labels.index(-1)} is in no part")
    return labels


def nor_lift(parts: Sequence[set[int]], pred: KaryPredicate, cover: CoverMap) -> list[set[int]]:
    """Shift each layer of the partition so the all-zero pattern lands on P's supported tuple.

    Part ``j`` of the result collects, for each position ``i``, layer ``i``
    copies of the part ``(j - a_i) mod r`` where ``a`` is the supported tuple.
    """
    if len(pred.support) != 1:
        raise NotSingleton(f"predicate support has {len(pred.support)} tuples")
    if not pred.is_uniform:
        raise BadParameters("nor_lift needs a single domain")
    r, k = pred.domains[0], pred.arity
    if len(parts) != r or cover.k != k:
        raise BadParameters(f"expected an {r}-partition and a {k}-fold cover")
    labels_from_partition(parts, cover.n)
    (a,) = pred.support
    return [{cover.forward(v, i) for i in range(k) for v in parts[(j - a[i]) % r]} for j in range(r)]
