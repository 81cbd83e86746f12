"""Cut sparsification and the CSP sparsification pipeline built on it.

Binary CSP(P) instances with a sparsifiable P are sparsified through the
double cover: the value of every assignment equals an l-Cut value on the
cover, so any cut sparsifier of the cover pulls back to a CSP sparsifier.
The cut sparsifier samples edges with probability inversely proportional to
a strength estimate. At desk scale every candidate is checked exhaustively
and resampled with a larger oversampling factor on failure.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .covers import (
    CoverMap,
    UnionFind,
    biclique_colouring,
    bipartite_double_cover,
    labels_from_partition,
    prune_isolated,
)
from .csp import (
    DEFAULT_MAX_BRUTEFORCE,
    Constraint,
    CspInstance,
    WeightedGraph,
    assignment_matrix,
    graph_of,
    satisfied_matrix,
)
from .errors import (
    BadEpsilon,
    BadParameters,
    NotASubgraphOfCover,
    NotASubinstance,
    NotBinary,
    NotSparsifiablePredicate,
    TooLarge,
    VertexOutOfRange,
)
from .predicates import find_singleton_subpredicate

REL_SLACK = 1e-9
MAX_ROUNDS = 10
# oversampling constant when every candidate is checked exhaustively
VERIFIED_OVERSAMPLING = 1 / 32
# oversampling constant when nothing can be checked
UNVERIFIED_OVERSAMPLING = 8.0
CHUNK = 1 << 16
_MASK64 = (1 << 64) - 1

EXHAUSTIVE_PASS = "exhaustive-pass"
EXHAUSTIVE_FAIL = "exhaustive-fail"
UNVERIFIED = "unverified"


@dataclass
class SparsifierReport:
    epsilon: float
    seed: int
    retained: list[int]
    new_weights: list[float]
    verified: str
    oversampling_rounds: int


@dataclass
class VerificationResult:
    passed: bool
    witness: Optional[tuple[int, ...]] = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.passed


def check_epsilon(eps: float) -> float:
    eps = float(eps)
    if not 0 < eps < 1:
        raise BadEpsilon(f"epsilon must lie strictly between 0 and 1, got {eps}")
    return eps


def within_bounds(original, candidate, eps: float):
    """Elementwise test of ``candidate in (1 +- eps) * original`` with a tiny relative slack.

    A zero original value demands an exactly zero candidate.
    """
    original = np.asarray(original, dtype=float)
    candidate = np.asarray(candidate, dtype=float)
    lo = (1 - eps) * original * (1 - REL_SLACK)
    hi = (1 + eps) * original * (1 + REL_SLACK)
    ok = (candidate >= lo) & (candidate <= hi)
    return np.where(original == 0, candidate == 0, ok)


def cut_value(g: WeightedGraph, subset) -> float:
    s = set(subset)
    for v in s:
        if not 0 <= v < g.n:
            raise VertexOutOfRange(f"vertex {v} not in a graph on {g.n} vertices")
    return sum(w for u, v, w in g.edges if (u in s) != (v in s))


def lcut_value(g: WeightedGraph, parts: Sequence[set[int]]) -> float:
    labels = labels_from_partition(parts, g.n)
    return sum(w for u, v, w in g.edges if labels[u] != labels[v])


def lcut_value_labels(g: WeightedGraph, labels: Sequence[int]) -> float:
    return sum(w for u, v, w in g.edges if labels[u] != labels[v])


def strength_estimates(g: WeightedGraph) -> list[int]:
    """Peel maximum-weight spanning forests; an edge in the i-th forest gets estimate i."""
    remaining = sorted(range(g.m), key=lambda i: (-g.edges[i][2], i))
    est = [0] * g.m
    level = 0
    while remaining:
        level += 1
        uf = UnionFind(g.n)
        rest = []
        for i in remaining:
            u, v, _ = g.edges[i]
            if uf.union(u, v):
                est[i] = level
            else:
                rest.append(i)
        remaining = rest
    return est


def _cut_rows(n: int, start: int, stop: int) -> np.ndarray:
    # subsets of vertices 0..n-2 by bit pattern; vertex n-1 always outside (cuts are complement-symmetric)
    idx = np.arange(start, stop, dtype=np.int64)
    return np.stack([(idx >> v) & 1 for v in range(n)], axis=1).astype(bool) if n else np.zeros((len(idx), 0), bool)


def _cuts(g: WeightedGraph, rows: np.ndarray) -> np.ndarray:
    out = np.zeros(rows.shape[0])
    for u, v, w in g.edges:
        out += w * (rows[:, u] != rows[:, v])
    return out


def verify_cut_sparsifier(g: WeightedGraph, h: WeightedGraph, eps: float,
                          cap: int = DEFAULT_MAX_BRUTEFORCE) -> VerificationResult:
    """Check every cut of ``h`` against ``g``; the witness is the failing vertex subset."""
    if g.n != h.n:
        raise BadParameters("graphs live on different vertex sets")
    if g.n <= 1:
        return VerificationResult(True, None, 1)
    total = 1 << (g.n - 1)
    if total > cap:
        raise TooLarge(f"{total} cuts exceed the brute-force cap {cap}")
    for start in range(0, total, CHUNK):
        rows = _cut_rows(g.n - 1, start, min(total, start + CHUNK))
        rows = np.concatenate([rows, np.zeros((rows.shape[0], 1), bool)], axis=1)
        ok = within_bounds(_cuts(g, rows), _cuts(h, rows), eps)
        if not ok.all():
            bad = rows[int(np.argmin(ok))]
            return VerificationResult(False, tuple(int(v) for v in np.flatnonzero(bad)), start + int(np.argmin(ok)) + 1)
    return VerificationResult(True, None, total)


def _rng(seed: int, round_: int) -> np.random.Generator:
    return np.random.default_rng((int(seed) ^ round_) & _MASK64)


def sparsify_cut(
    g: WeightedGraph,
    eps: float,
    seed: int = 0,
    max_bruteforce: int = DEFAULT_MAX_BRUTEFORCE,
    accept: Optional[Callable[[WeightedGraph, list[int]], bool]] = None,
) -> tuple[WeightedGraph, SparsifierReport]:
    """Strength-sampling cut sparsifier with verify-and-retry.

    Edge ``e`` survives with probability ``min(1, rho / s_e)`` at weight
    ``w_e / p_e``, where ``rho = ceil(C * ln(max(n, 2)) / eps^2)``. When
    every cut can be enumerated (or ``accept`` is given) C is small, so rho
    starts at 1 and doubles after each rejected sample. The last round keeps
    every edge, so the loop always ends with a passing graph. Otherwise a
    single sample with C = 8 is returned unverified.

    ``accept(candidate, retained)`` replaces the default all-cuts check.
    """
    eps = check_epsilon(eps)
    n, m = g.n, g.m
    log_n = math.log(max(n, 2))
    exhaustive = accept is not None or n <= 1 or (1 << (n - 1)) <= max_bruteforce
    if accept is None and exhaustive:
        def accept(candidate, _retained):
            return verify_cut_sparsifier(g, candidate, eps, max_bruteforce).passed

    strength = np.array(strength_estimates(g), dtype=float)
    weights = np.array([w for _, _, w in g.edges], dtype=float)
    if exhaustive:
        rho = float(math.ceil(VERIFIED_OVERSAMPLING * log_n / eps ** 2))
        rounds = MAX_ROUNDS
    else:
        rho = float(math.ceil(UNVERIFIED_OVERSAMPLING * log_n / eps ** 2))
        rounds = 1

    for t in range(rounds):
        last = exhaustive and t == rounds - 1
        if last:
            p = np.ones(m)
        else:
            p = np.minimum(1.0, rho / strength) if m else np.ones(0)
        keep = _rng(seed, t).random(m) < p
        retained = [int(i) for i in np.flatnonzero(keep)]
        new_w = [float(weights[i] / p[i]) for i in retained]
        h = WeightedGraph(n, tuple((g.edges[i][0], g.edges[i][1], w) for i, w in zip(retained, new_w)),
                          directed=g.directed, bipartition=g.bipartition)
        if not exhaustive:
            return h, SparsifierReport(eps, seed, retained, new_w, UNVERIFIED, t + 1)
        if accept(h, retained):
            return h, SparsifierReport(eps, seed, retained, new_w, EXHAUSTIVE_PASS, t + 1)
        if last:
            return h, SparsifierReport(eps, seed, retained, new_w, EXHAUSTIVE_FAIL, t + 1)
        rho *= 2
    raise AssertionError("unreachable")


def pull_back(g: WeightedGraph, sparse_cover: WeightedGraph, cover: CoverMap) -> WeightedGraph:
    """Subgraph of ``g`` keeping ``(u, v)`` at the weight of ``{u^0, v^1}`` in ``sparse_cover``."""
    if cover.k != 2 or cover.n != g.n or sparse_cover.n != cover.size:
        raise NotASubgraphOfCover("cover map does not match the graphs")
    originals = {(u, v) for u, v, _ in g.edges}
    chosen = {}
    for x, y, w in sparse_cover.edges:
        (a, la), (b, lb) = cover.backward(x), cover.backward(y)
        if (la, lb) == (1, 0):
            (a, la), (b, lb) = (b, lb), (a, la)
        if (la, lb) != (0, 1) or (a, b) not in originals:
            raise NotASubgraphOfCover(f"cover edge ({x}, {y}) does not lift an edge of the graph")
        chosen[(a, b)] = w
    edges = tuple((u, v, chosen[(u, v)]) for u, v, _ in g.edges if (u, v) in chosen)
    return WeightedGraph(g.n, edges, directed=g.directed)


def sparsify_csp(
    inst: CspInstance,
    eps: float,
    seed: int = 0,
    max_bruteforce: int = DEFAULT_MAX_BRUTEFORCE,
) -> tuple[CspInstance, SparsifierReport]:
    """Sparsify a binary instance through a cut sparsifier of its double cover.

    Isolated cover vertices are pruned first. When the instance can be
    enumerated, each sampled candidate is accepted or rejected by checking
    every assignment directly. Otherwise the candidate is checked against
    all cuts of the pruned cover if that is small enough, and returned
    unverified if not.
    """
    eps = check_epsilon(eps)
    pred = inst.predicate
    if pred.arity != 2:
        raise NotBinary("only binary instances can be sparsified")
    if find_singleton_subpredicate(pred) is not None:
        raise NotSparsifiablePredicate("predicate contains a singleton 2x2 restriction")
    biclique_colouring(pred)

    g = graph_of(inst)
    cover_graph, cover = bipartite_double_cover(g)
    tau, kept = prune_isolated(cover_graph)

    accept = None
    if inst.assignment_count() <= max_bruteforce:
        def accept(candidate, retained):
            trial = _subinstance(inst, retained, [w for _, _, w in candidate.edges])
            return verify_sparsifier(inst, trial, eps, max_bruteforce).passed

    sparse_tau, report = sparsify_cut(tau, eps, seed, max_bruteforce, accept)
    # cover and pruning keep edge order, so tau edge i is constraint i
    sparse_cover = WeightedGraph(cover.size, tuple((kept[u], kept[v], w) for u, v, w in sparse_tau.edges),
                                 directed=False)
    g_eps = pull_back(g, sparse_cover, cover)
    assert [(u, v) for u, v, _ in g_eps.edges] == [inst.constraints[i].scope for i in report.retained]
    return _subinstance(inst, report.retained, [w for _, _, w in g_eps.edges]), report


def _subinstance(inst: CspInstance, retained: Sequence[int], weights: Sequence[float]) -> CspInstance:
    return inst.with_constraints([Constraint(inst.constraints[i].scope, w) for i, w in zip(retained, weights)])


def check_subinstance(inst: CspInstance, sub: CspInstance) -> None:
    if (sub.variables, sub.domains, sub.predicate) != (inst.variables, inst.domains, inst.predicate):
        raise NotASubinstance("variables, domains and predicate must match the original")
    scopes = set(inst.scopes)
    for c in sub.constraints:
        if c.scope not in scopes:
            raise NotASubinstance(f"scope {c.scope} is not a constraint of the original")


def verify_sparsifier(
    inst: CspInstance,
    sub: CspInstance,
    eps: float,
    max_bruteforce: int = DEFAULT_MAX_BRUTEFORCE,
    jobs: int = 1,
) -> VerificationResult:
    """Exhaustively check ``value(sub, A) in (1 +- eps) value(inst, A)`` for every assignment.

    The witness is the lexicographically smallest failing assignment,
    independent of ``jobs``.
    """
    eps = check_epsilon(eps)
    check_subinstance(inst, sub)
    total = inst.assignment_count()
    if total > max_bruteforce:
        raise TooLarge(f"{total} assignments exceed the brute-force cap {max_bruteforce}")
    w, w_sub = inst.weights, sub.weights

    def first_failure(start: int) -> Optional[int]:
        rows = assignment_matrix(inst.domains, start, start + CHUNK)
        ok = within_bounds(satisfied_matrix(inst, rows) @ w if w.size else np.zeros(len(rows)),
                           satisfied_matrix(sub, rows) @ w_sub if w_sub.size else np.zeros(len(rows)), eps)
        return None if ok.all() else start + int(np.argmin(ok))

    starts = range(0, total, CHUNK)
    if jobs > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            failures = [f for f in pool.map(first_failure, starts) if f is not None]
    else:
        failures = []
        for s in starts:
            f = first_failure(s)
            if f is not None:
                failures.append(f)
                break
    if not failures:
        return VerificationResult(True, None, total)
    idx = min(failures)
    witness = tuple(int(x) for x in assignment_matrix(inst.domains, idx, idx + 1)[0])
    return VerificationResult(False, witness, total)


def _derived_seed(seed: int, part: int) -> int:
    return int(np.random.SeedSequence([int(seed) & _MASK64, part]).generate_state(1, np.uint64)[0])


def sparsify_language(
    instances: Sequence[CspInstance],
    eps: float,
    seed: int = 0,
    max_bruteforce: int = DEFAULT_MAX_BRUTEFORCE,
) -> list[tuple[CspInstance, SparsifierReport]]:
    """Sparsify each single-predicate part on its own; the union is a sparsifier of the whole."""
    eps = check_epsilon(eps)
    if instances:
        first = instances[0]
        for inst in instances[1:]:
            if (inst.variables, inst.domains) != (first.variables, first.domains):
                raise BadParameters("all parts must share variables and domains")
    seen = set()
    for inst in instances:
        for c in inst.constraints:
            key = (c.scope, inst.predicate)
            if key in seen:
                raise BadParameters(f"scope {c.scope} appears twice with the same predicate")
            seen.add(key)
    if len(instances) == 1:
        return [sparsify_csp(instances[0], eps, seed, max_bruteforce)]
    return [sparsify_csp(inst, eps, _derived_seed(seed, i), max_bruteforce) for i, inst in enumerate(instances)]


def combined_values(instances: Sequence[CspInstance], max_bruteforce: int = DEFAULT_MAX_BRUTEFORCE) -> np.ndarray:
    """Value of the union of several parts over every assignment."""
    first = instances[0]
    total = first.assignment_count()
    if total > max_bruteforce:
        raise TooLarge(f"{total} assignments exceed the brute-force cap {max_bruteforce}")
    rows = assignment_matrix(first.domains)
    out = np.zeros(total)
    for inst in instances:
        if inst.constraints:
            out += satisfied_matrix(inst, rows) @ inst.weights
    return out
