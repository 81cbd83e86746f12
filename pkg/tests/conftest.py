"""Shared fixtures and brute-force oracles.

The oracles below are written straight from the definitions with plain
loops, so they share no code with the library paths they check.
"""

import itertools
import random

import pytest

from csparsify import KaryPredicate, WeightedGraph, instance_of

PFIG_SUPPORT = [(0, 0), (0, 2), (0, 3), (1, 0), (1, 1), (2, 0), (2, 1), (3, 1), (3, 2), (3, 3)]


@pytest.fixture
def p_fig():
    return KaryPredicate((4, 4), PFIG_SUPPORT)


def brute_singleton_restrictions(support, r, s):
    """All (B, C, cell) with exactly one supported cell in B x C."""
    out = []
    for b in itertools.combinations(range(r), 2):
        for c in itertools.combinations(range(s), 2):
            cells = [(x, y) for x in b for y in c if (x, y) in support]
            if len(cells) == 1:
                out.append((b, c, cells[0]))
    return out


def brute_value(constraints, pred_support, assignment):
    total = 0.0
    for scope, w in constraints:
        if tuple(assignment[v] for v in scope) in pred_support:
            total += w
    return total


def brute_cut(edges, subset):
    return sum(w for u, v, w in edges if (u in subset) != (v in subset))


def brute_has_lcube(support, domains, ell):
    """Literal reading of the definition: a position choice, two-label subdomains, a forced corner."""
    k = len(domains)
    for positions in itertools.permutations(range(k), ell):
        if list(positions) != sorted(positions):
            continue
        rest = [p for p in range(k) if p not in positions]
        for subs in itertools.product(*[list(itertools.combinations(range(domains[p]), 2)) for p in positions]):
            for n in itertools.product((0, 1), repeat=ell):
                exists = False
                forced = True
                for ys in itertools.product(*[range(domains[p]) for p in rest]):
                    for idx in itertools.product((0, 1), repeat=ell):
                        t = [0] * k
                        for p, pair, i in zip(positions, subs, idx):
                            t[p] = pair[i]
                        for p, y in zip(rest, ys):
                            t[p] = y
                        if tuple(t) in support:
                            if idx == n:
                                exists = True
                            else:
                                forced = False
                if exists and forced:
                    return True
    return False


def random_predicate(rng, domains, density=0.5):
    cells = itertools.product(*[range(d) for d in domains])
    return KaryPredicate(domains, [t for t in cells if rng.random() < density])


def random_sparsifiable(rng, r, s, tries=10000):
    """Rejection sampling of a binary predicate with no singleton 2x2 restriction."""
    for _ in range(tries):
        pred = random_predicate(rng, (r, s), rng.choice([0.3, 0.5, 0.7]))
        if not brute_singleton_restrictions(pred.support, r, s):
            return pred
    raise RuntimeError("no sparsifiable predicate found")


def random_digraph(rng, n, m, max_w=5, integer=True):
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    rng.shuffle(pairs)
    edges = []
    for u, v in pairs[:m]:
        w = rng.randint(1, max_w) if integer else rng.uniform(0.5, max_w)
        edges.append((u, v, float(w)))
    return WeightedGraph(n, tuple(edges))


def random_instance(rng, pred, n, m, max_w=5):
    return instance_of(random_digraph(rng, n, m, max_w), pred)


@pytest.fixture
def rng():
    return random.Random(20261015)
