"""Hard instances and hitting-set lower bounds on sparsifier size.

Every sparsifier must keep at least one constraint satisfied by each
assignment of positive value, otherwise that value drops to zero. A minimum
hitting set of the per-assignment satisfied sets is therefore a lower bound
on the number of retained constraints, for every epsilon.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .csp import (
    DEFAULT_MAX_BRUTEFORCE,
    Constraint,
    CspInstance,
    KUniformHypergraph,
    assignment_matrix,
    instance_of,
    satisfied,
    satisfied_matrix,
)
from .errors import (
    BadParameters,
    InvalidWitness,
    NoUnusedLabel,
    NonUniformDomains,
    TooLarge,
    ZeroValueAssignment,
)
from .predicates import CubeWitness, KaryPredicate, SingletonWitness, find_unused_label

EXACT_HITTING_CAP = 64


@dataclass
class LowerBoundCertificate:
    assignment_family: list[tuple[int, ...]]
    support_sets: list[list[int]]
    bound: int
    exact: bool = True


def grid_instance(
    pred: KaryPredicate,
    witness: SingletonWitness,
    n: int,
    weights: Optional[Sequence[float]] = None,
) -> tuple[CspInstance, list[tuple[int, ...]]]:
    """Complete bipartite instance x_i -> y_j with the assignments that isolate each constraint.

    Assignment ``(i, j)`` of the family (row-major) puts the witness cell on
    ``(x_i, y_j)`` and the other pair labels everywhere else, so exactly one
    constraint is satisfied.
    """
    if not witness.holds_for(pred):
        raise InvalidWitness(f"{witness} is not a singleton restriction of {pred}")
    if n < 1:
        raise BadParameters(f"n must be positive, got {n}")
    if weights is None:
        weights = [1.0] * (n * n)
    if len(weights) != n * n:
        raise BadParameters(f"need {n * n} weights, got {len(weights)}")
    r, s = pred.domains
    variables = [f"x{i + 1}" for i in range(n)] + [f"y{j + 1}" for j in range(n)]
    domains = [r] * n + [s] * n
    constraints = [Constraint((i, n + j), weights[i * n + j]) for i in range(n) for j in range(n)]
    inst = CspInstance(tuple(variables), tuple(domains), pred, tuple(constraints))
    b, c = witness.supported_cell
    b2, c2 = witness.other_left, witness.other_right
    family = []
    for i in range(n):
        for j in range(n):
            a = [b2] * n + [c2] * n
            a[i] = b
            a[n + j] = c
            family.append(tuple(a))
    return inst, family


def cube_hypergraph(pred: KaryPredicate, witness: CubeWitness, q: int) -> tuple[KUniformHypergraph, list[tuple[int, ...]]]:
    """All q^k cross hyperedges over k parts of size q, with one assignment per choice of cube vertices.

    Vertex ``a`` of part ``p`` is ``p * q + a``; hyperedge entry ``p`` is drawn
    from part ``p``.
    """
    if not witness.holds_for(pred):
        raise InvalidWitness(f"{witness} is not a singleton cube of {pred}")
    if q < 1:
        raise BadParameters(f"q must be positive, got {q}")
    k = pred.arity
    parts = [range(p * q, (p + 1) * q) for p in range(k)]
    edges = tuple((e, 1.0) for e in itertools.product(*parts))
    h = KUniformHypergraph(k * q, k, edges)
    family = []
    for chosen in itertools.product(range(q), repeat=witness.ell):
        a = [0] * (k * q)
        for p, x in witness.filler:
            for v in parts[p]:
                a[v] = x
        for p, pair, n_j, pick in zip(witness.positions, witness.subdomains, witness.picked, chosen):
            for v in parts[p]:
                a[v] = pair[1 - n_j]
            a[p * q + pick] = pair[n_j]
        family.append(tuple(a))
    return h, family


def minimum_hitting_set(sets: Sequence[Sequence[int]]) -> list[int]:
    """Exact minimum hitting set by branch and bound.

    Sets are bitmasks internally. Supersets are dropped first, a greedy
    solution gives the initial upper bound, and a greedy packing of pairwise
    disjoint sets gives the lower bound used for pruning. Branching is on the
    elements of the smallest unhit set; elements already rejected on earlier
    branches are forbidden further down.
    """
    if any(e < 0 for s in sets for e in s):
        raise BadParameters("hitting-set elements must be non-negative integers")
    masks = _minimal_masks(sets)
    if any(m == 0 for m in masks):
        raise ZeroValueAssignment("an empty set cannot be hit")
    best = _greedy_hitting(masks)
    best_count = [bin(best).count("1")]
    best_mask = [best]

    def packing(avail_sets):
        used = 0
        count = 0
        for m in sorted(avail_sets, key=lambda x: bin(x).count("1")):
            if not m & used:
                used |= m
                count += 1
        return count

    def search(remaining, chosen, size, forbidden):
        if not remaining:
            if size < best_count[0]:
                best_count[0], best_mask[0] = size, chosen
            return
        avail = [m & ~forbidden for m in remaining]
        if any(a == 0 for a in avail):
            return
        if size + packing(avail) >= best_count[0]:
            return
        target = min(avail, key=lambda x: (bin(x).count("1"), x))
        elements = [e for e in range(target.bit_length()) if target >> e & 1]
        freq = {e: sum(1 for a in avail if a >> e & 1) for e in elements}
        elements.sort(key=lambda e: (-freq[e], e))
        banned = forbidden
        for e in elements:
            bit = 1 << e
            search([m for m in remaining if not m & bit], chosen | bit, size + 1, banned)
            banned |= bit

    search(masks, 0, 0, 0)
    mask = best_mask[0]
    return [e for e in range(mask.bit_length()) if mask >> e & 1]


def packing_lower_bound(sets: Sequence[Sequence[int]]) -> int:
    """Size of a greedy family of pairwise disjoint sets, a valid hitting-set lower bound."""
    used = set()
    count = 0
    for s in sorted((set(x) for x in sets), key=lambda x: (len(x), sorted(x))):
        if not s & used:
            used |= s
            count += 1
    return count


def _minimal_masks(sets):
    masks = sorted({sum(1 << e for e in set(s)) for s in sets}, key=lambda m: (bin(m).count("1"), m))
    out = []
    for m in masks:
        if not any(k & m == k for k in out):
            out.append(m)
    return out


def _greedy_hitting(masks):
    chosen = 0
    left = list(masks)
    while left:
        counts = {}
        for m in left:
            for e in range(m.bit_length()):
                if m >> e & 1:
                    counts[e] = counts.get(e, 0) + 1
        e = min(counts, key=lambda x: (-counts[x], x))
        chosen |= 1 << e
        left = [m for m in left if not m >> e & 1]
    return chosen


def hitting_lower_bound(
    inst: CspInstance,
    family: Sequence[Sequence[int]],
    cap: int = EXACT_HITTING_CAP,
) -> LowerBoundCertificate:
    """Minimum hitting set over the constraint sets satisfied by each family member.

    Above ``cap`` constraints the exact search is skipped and a disjoint
    packing bound is reported with ``exact=False``; it is still a valid lower
    bound.
    """
    family = [tuple(int(x) for x in a) for a in family]
    support_sets = []
    for a in family:
        sat = satisfied(inst, a)
        if not sat:
            raise ZeroValueAssignment(f"assignment {a} satisfies no constraint")
        support_sets.append(sat)
    if len(inst.constraints) <= cap:
        bound = len(minimum_hitting_set(support_sets)) if support_sets else 0
        return LowerBoundCertificate(family, support_sets, bound, True)
    return LowerBoundCertificate(family, support_sets, packing_lower_bound(support_sets), False)


def exhaustive_family(inst: CspInstance, max_bruteforce: int = DEFAULT_MAX_BRUTEFORCE) -> list[tuple[int, ...]]:
    """One assignment per inclusion-minimal nonempty satisfied set, over all assignments.

    Hitting these sets is equivalent to hitting the sets of every positive
    assignment, so this family gives the strongest hitting-set bound.
    """
    total = inst.assignment_count()
    if total > max_bruteforce:
        raise TooLarge(f"{total} assignments exceed the brute-force cap {max_bruteforce}")
    if not inst.constraints:
        return []
    first = {}
    for start in range(0, total, 1 << 16):
        rows = assignment_matrix(inst.domains, start, start + (1 << 16))
        sat = satisfied_matrix(inst, rows)
        patterns, idx = np.unique(sat, axis=0, return_index=True)
        for pattern, i in zip(patterns, idx):
            mask = sum(1 << int(e) for e in np.flatnonzero(pattern))
            if mask and mask not in first:
                first[mask] = tuple(int(x) for x in rows[i])
    minimal = _minimal_masks([[e for e in range(m.bit_length()) if m >> e & 1] for m in first])
    return sorted(first[m] for m in minimal)


def unused_label_bound(inst: CspInstance, z: Optional[int] = None) -> LowerBoundCertificate:
    """Bound from the unused label: per constraint, its smallest supported tuple on the scope and ``z`` elsewhere."""
    pred = inst.predicate
    if not pred.is_uniform or len(set(inst.domains)) > 1:
        raise NonUniformDomains("unused-label bounds need a single domain")
    found = find_unused_label(pred)
    if z is None:
        z = found
    if z is None:
        raise NoUnusedLabel(f"every label occurs in the support of {pred}")
    if any(z in t for t in pred.support) or not 0 <= z < pred.domains[0]:
        raise NoUnusedLabel(f"label {z} is not unused in {pred}")
    a = min(pred.support)
    family = []
    for c in inst.constraints:
        labels = [z] * inst.n
        for v, x in zip(c.scope, a):
            labels[v] = x
        family.append(tuple(labels))
    return hitting_lower_bound(inst, family)


def cube_instance(pred: KaryPredicate, witness: CubeWitness, q: int) -> tuple[CspInstance, list[tuple[int, ...]]]:
    h, family = cube_hypergraph(pred, witness, q)
    return instance_of(h, pred), family
