"""CSP instances, assignments and their (hyper)graph views."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .errors import (
    ArityMismatch,
    BadParameters,
    InvalidAssignment,
    NotBinary,
    TooLarge,
)
from .predicates import KaryPredicate

DEFAULT_MAX_BRUTEFORCE = 2 ** 20


@dataclass(frozen=True)
class Constraint:
    scope: tuple[int, ...]
    weight: float

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(int(v) for v in self.scope))
        object.__setattr__(self, "weight", float(self.weight))


@dataclass(frozen=True)
class CspInstance:
    variables: tuple[str, ...]
    domains: tuple[int, ...]
    predicate: KaryPredicate
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(str(v) for v in self.variables))
        object.__setattr__(self, "domains", tuple(int(r) for r in self.domains))
        object.__setattr__(self, "constraints", tuple(
            c if isinstance(c, Constraint) else Constraint(tuple(c[0]), c[1]) for c in self.constraints))
        n = len(self.variables)
        if len(set(self.variables)) != n:
            raise BadParameters("variable names must be distinct")
        if len(self.domains) != n:
            raise BadParameters(f"{n} variables but {len(self.domains)} domain sizes")
        if any(r < 1 for r in self.domains):
            raise BadParameters("domain sizes must be positive")
        k = self.predicate.arity
        seen = set()
        for c in self.constraints:
            scope = c.scope
            if len(scope) != k:
                raise ArityMismatch(f"scope {scope} has length {len(scope)}, predicate arity is {k}")
            if len(set(scope)) != k:
                raise BadParameters(f"scope {scope} repeats a variable")
            if any(not 0 <= v < n for v in scope):
                raise BadParameters(f"scope {scope} references an unknown variable")
            if scope in seen:
                raise BadParameters(f"duplicate scope {scope}")
            seen.add(scope)
            if not (c.weight > 0 and math.isfinite(c.weight)):
                raise BadParameters(f"weights must be positive and finite, got {c.weight}")
            for pos, v in enumerate(scope):
                if self.domains[v] > self.predicate.domains[pos]:
                    raise BadParameters(
                        f"variable {self.variables[v]} has domain {self.domains[v]} but position {pos} "
                        f"of the predicate only admits {self.predicate.domains[pos]} labels")

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def scopes(self) -> list[tuple[int, ...]]:
        return [c.scope for c in self.constraints]

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.constraints], dtype=float)

    def assignment_count(self) -> int:
        return math.prod(self.domains)

    def with_constraints(self, constraints: Sequence[Constraint]) -> "CspInstance":
        return CspInstance(self.variables, self.domains, self.predicate, tuple(constraints))


def value(inst: CspInstance, assignment: Sequence[int]) -> float:
    """Total weight of satisfied constraints."""
    check_assignment(inst, assignment)
    sup = inst.predicate.support
    total = 0.0
    for c in inst.constraints:
        if tuple(assignment[v] for v in c.scope) in sup:
            total += c.weight
    return total


def satisfied(inst: CspInstance, assignment: Sequence[int]) -> list[int]:
    """Indices of constraints satisfied by ``assignment``."""
    check_assignment(inst, assignment)
    sup = inst.predicate.support
    return [i for i, c in enumerate(inst.constraints) if tuple(assignment[v] for v in c.scope) in sup]


def check_assignment(inst: CspInstance, assignment: Sequence[int]) -> None:
    if len(assignment) != inst.n:
        raise InvalidAssignment(f"assignment has {len(assignment)} labels for {inst.n} variables")
    for v, (x, r) in enumerate(zip(assignment, inst.domains)):
        if not 0 <= x < r:
            raise InvalidAssignment(f"label {x} outside the domain [{r}] of {inst.variables[v]}")


def enumerate_assignments(inst: CspInstance, cap: int = DEFAULT_MAX_BRUTEFORCE) -> Iterator[tuple[int, ...]]:
    """Every valid assignment once, in lexicographic order."""
    _check_cap(inst, cap)
    return itertools.product(*(range(r) for r in inst.domains))


def _check_cap(inst: CspInstance, cap: int) -> None:
    count = inst.assignment_count()
    if count > cap:
        raise TooLarge(f"{count} assignments exceed the brute-force cap {cap}")


def assignment_matrix(domains: Sequence[int], start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    """Rows ``start:stop`` of the lexicographic assignment table as an int array."""
    total = math.prod(domains)
    stop = total if stop is None else min(stop, total)
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), len(domains)), dtype=np.int64)
    for col in range(len(domains) - 1, -1, -1):
        r = domains[col]
        out[:, col] = idx % r
        idx = idx // r
    return out


def satisfied_matrix(inst: CspInstance, rows: np.ndarray) -> np.ndarray:
    """Boolean matrix: entry (a, i) tells whether row ``a`` satisfies constraint ``i``."""
    table = inst.predicate.table
    out = np.zeros((rows.shape[0], len(inst.constraints)), dtype=bool)
    for i, c in enumerate(inst.constraints):
        out[:, i] = table[tuple(rows[:, v] for v in c.scope)] == 1
    return out


def all_values(inst: CspInstance, cap: int = DEFAULT_MAX_BRUTEFORCE) -> np.ndarray:
    """Vector of values over every assignment in lexicographic order."""
    _check_cap(inst, cap)
    rows = assignment_matrix(inst.domains)
    return satisfied_matrix(inst, rows).astype(float) @ inst.weights


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    edges: tuple[tuple[int, int, float], ...]
    directed: bool = True
    bipartition: Optional[tuple[frozenset[int], frozenset[int]]] = None

    def __post_init__(self):
        edges = tuple((int(u), int(v), float(w)) for u, v, w in self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for u, v, w in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise BadParameters(f"edge ({u}, {v}) outside {self.n} vertices")
            if u == v:
                raise BadParameters(f"self-loop at {u}")
            if not (w > 0 and math.isfinite(w)):
                raise BadParameters(f"edge weights must be positive, got {w}")
            key = (u, v) if self.directed else frozenset((u, v))
            if key in seen:
                raise BadParameters(f"duplicate edge ({u}, {v})")
            seen.add(key)
        if self.bipartition is not None:
            left, right = (frozenset(s) for s in self.bipartition)
            object.__setattr__(self, "bipartition", (left, right))
            if left & right or (left | right) != frozenset(range(self.n)):
                raise BadParameters("bipartition must split the vertex set")
            for u, v, _ in edges:
                if not ((u in left and v in right) or (u in right and v in left)):
                    raise BadParameters(f"edge ({u}, {v}) does not cross the bipartition")

    @property
    def m(self) -> int:
        return len(self.edges)

    def total_weight(self) -> float:
        return sum(w for _, _, w in self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def edge_set(self) -> set:
        if self.directed:
            return {(u, v) for u, v, _ in self.edges}
        return {frozenset((u, v)) for u, v, _ in self.edges}


@dataclass(frozen=True)
class KUniformHypergraph:
    n: int
    k: int
    edges: tuple[tuple[tuple[int, ...], float], ...] = field(default=())

    def __post_init__(self):
        edges = tuple((tuple(int(x) for x in e), float(w)) for e, w in self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for e, w in edges:
            if len(e) != self.k:
                raise ArityMismatch(f"hyperedge {e} is not {self.k}-uniform")
            if len(set(e)) != self.k:
                raise BadParameters(f"hyperedge {e} repeats a vertex")
            if any(not 0 <= x < self.n for x in e):
                raise BadParameters(f"hyperedge {e} outside {self.n} vertices")
            if not (w > 0 and math.isfinite(w)):
                raise BadParameters(f"hyperedge weights must be positive, got {w}")
            if e in seen:
                raise BadParameters(f"duplicate hyperedge {e}")
            seen.add(e)

    @property
    def m(self) -> int:
        return len(self.edges)


def graph_of(inst: CspInstance) -> WeightedGraph:
    if inst.predicate.arity != 2:
        raise NotBinary("graph_of needs a binary instance; use hypergraph_of")
    return WeightedGraph(inst.n, tuple((c.scope[0], c.scope[1], c.weight) for c in inst.constraints), directed=True)


def hypergraph_of(inst: CspInstance) -> KUniformHypergraph:
    return KUniformHypergraph(inst.n, inst.predicate.arity, tuple((c.scope, c.weight) for c in inst.constraints))


def instance_of(
    graph: Union[WeightedGraph, KUniformHypergraph],
    pred: KaryPredicate,
    variables: Optional[Sequence[str]] = None,
    domains: Optional[Sequence[int]] = None,
) -> CspInstance:
    """One constraint per (hyper)edge, same weight.

    Without explicit ``domains`` each variable gets the intersection of the
    predicate domains at the positions it occupies (the largest domain if it
    occupies none).
    """
    if isinstance(graph, WeightedGraph):
        scopes = [((u, v), w) for u, v, w in graph.edges]
        arity = 2
    else:
        scopes = list(graph.edges)
        arity = graph.k
    if pred.arity != arity:
        raise ArityMismatch(f"predicate arity {pred.arity} does not match edge arity {arity}")
    n = graph.n
    if variables is None:
        variables = [f"v{i}" for i in range(n)]
    if domains is None:
        bound = [None] * n
        for scope, _ in scopes:
            for pos, v in enumerate(scope):
                r = pred.domains[pos]
                bound[v] = r if bound[v] is None else min(bound[v], r)
        top = max(pred.domains)
        domains = [top if b is None else b for b in bound]
    return CspInstance(tuple(variables), tuple(domains), pred,
                       tuple(Constraint(tuple(scope), w) for scope, w in scopes))
