"""Predicates over finite domains and their classification.

A predicate of arity k lives on ``[r_0] x ... x [r_{k-1}]`` where ``[r]`` is
``{0, ..., r-1}``. It is stored by its support (the tuples mapped to 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    BadCubeDim,
    BadParameters,
    DomainTooSmall,
    EmptySupport,
    NonUniformDomains,
    NotBinary,
    PairOutOfRange,
)

Label = int
Tuple_ = tuple[int, ...]


@dataclass(frozen=True)
class KaryPredicate:
    arity: int
    domains: tuple[int, ...]
    support: frozenset[Tuple_]

    def __init__(self, domains: Sequence[int], support: Iterable[Sequence[int]], arity: Optional[int] = None):
        domains = tuple(int(r) for r in domains)
        if arity is None:
            arity = len(domains)
        if arity < 1 or len(domains) != arity:
            raise BadParameters(f"arity {arity} does not match domains {domains}")
        if any(r < 1 for r in domains):
            raise BadParameters(f"domain sizes must be positive, got {domains}")
        tuples = [tuple(int(x) for x in t) for t in support]
        for t in tuples:
            if len(t) != arity:
                raise BadParameters(f"tuple {t} has length {len(t)}, expected {arity}")
            if any(not 0 <= x < r for x, r in zip(t, domains)):
                raise BadParameters(f"tuple {t} outside domains {domains}")
        sup = frozenset(tuples)
        if len(sup) != len(tuples):
            raise BadParameters("duplicate tuples in support")
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "domains", domains)
        object.__setattr__(self, "support", sup)

    def __call__(self, *labels: int) -> int:
        return 1 if tuple(labels) in self.support else 0

    def __repr__(self) -> str:
        return f"KaryPredicate(domains={list(self.domains)}, support={self.sorted_support()})"

    def sorted_support(self) -> list[Tuple_]:
        return sorted(self.support)

    @property
    def is_binary(self) -> bool:
        return self.arity == 2

    @property
    def is_uniform(self) -> bool:
        return len(set(self.domains)) == 1

    @cached_property
    def table(self) -> np.ndarray:
        """Dense 0/1 truth table, used for vectorised evaluation."""
        t = np.zeros(self.domains, dtype=np.int8)
        for tup in self.support:
            t[tup] = 1
        return t


@dataclass(frozen=True)
class SingletonWitness:
    left_pair: tuple[int, int]
    right_pair: tuple[int, int]
    supported_cell: tuple[int, int]

    @property
    def other_left(self) -> int:
        b = self.supported_cell[0]
        return self.left_pair[1] if self.left_pair[0] == b else self.left_pair[0]

    @property
    def other_right(self) -> int:
        c = self.supported_cell[1]
        return self.right_pair[1] if self.right_pair[0] == c else self.right_pair[0]

    def holds_for(self, pred: KaryPredicate) -> bool:
        if pred.arity != 2:
            return False
        (b0, b1), (c0, c1) = self.left_pair, self.right_pair
        if b0 == b1 or c0 == c1:
            return False
        r, s = pred.domains
        if not (0 <= b0 < r and 0 <= b1 < r and 0 <= c0 < s and 0 <= c1 < s):
            return False
        cells = [(b, c) for b in self.left_pair for c in self.right_pair if (b, c) in pred.support]
        return cells == [tuple(self.supported_cell)]


@dataclass(frozen=True)
class CubeWitness:
    """A singleton l-cube.

    ``positions[j]`` is the coordinate carrying cube axis j, with two-label
    subdomain ``subdomains[j]``; ``picked[j]`` indexes into that pair.
    ``filler`` maps every remaining coordinate to a label.
    """

    positions: tuple[int, ...]
    subdomains: tuple[tuple[int, int], ...]
    picked: tuple[int, ...]
    filler: tuple[tuple[int, int], ...]

    @property
    def ell(self) -> int:
        return len(self.positions)

    def picked_tuple(self, arity: int) -> Tuple_:
        out = [0] * arity
        for p, pair, n in zip(self.positions, self.subdomains, self.picked):
            out[p] = pair[n]
        for p, x in self.filler:
            out[p] = x
        return tuple(out)

    def holds_for(self, pred: KaryPredicate) -> bool:
        k = pred.arity
        if len(set(self.positions)) != len(self.positions) or not 2 <= self.ell <= k:
            return False
        if sorted(list(self.positions) + [p for p, _ in self.filler]) != list(range(k)):
            return False
        for p, pair in zip(self.positions, self.subdomains):
            if pair[0] == pair[1] or not all(0 <= d < pred.domains[p] for d in pair):
                return False
        if self.picked_tuple(k) not in pred.support:
            return False
        return _box_corners(pred, self.positions, self.subdomains) == {self.picked}


def restrict(pred: KaryPredicate, left: Sequence[int], right: Sequence[int]) -> KaryPredicate:
    """Restrict a binary predicate to ``left x right``, relabelled onto {0,1}^2."""
    if pred.arity != 2:
        raise NotBinary(f"restrict needs a binary predicate, got arity {pred.arity}")
    r, s = pred.domains
    B, C = sorted(set(left)), sorted(set(right))
    if len(B) != 2 or len(left) != 2 or len(C) != 2 or len(right) != 2:
        raise PairOutOfRange(f"need two distinct labels per side, got {left} and {right}")
    if not (0 <= B[0] and B[1] < r and 0 <= C[0] and C[1] < s):
        raise PairOutOfRange(f"pair {B} x {C} exceeds domains {pred.domains}")
    support = [(i, j) for i, b in enumerate(B) for j, c in enumerate(C) if (b, c) in pred.support]
    return KaryPredicate((2, 2), support)


def is_singleton(pred: KaryPredicate) -> bool:
    return len(pred.support) == 1


def _require_binary_pairs(pred: KaryPredicate) -> None:
    if pred.arity != 2:
        raise NotBinary(f"expected a binary predicate, got arity {pred.arity}")
    if min(pred.domains) < 2:
        raise DomainTooSmall(f"both domains need at least two labels, got {pred.domains}")


def find_singleton_subpredicate(pred: KaryPredicate) -> Optional[SingletonWitness]:
    """First (B, C) in lexicographic order whose 2x2 restriction is a singleton."""
    _require_binary_pairs(pred)
    r, s = pred.domains
    sup = pred.support
    for B in itertools.combinations(range(r), 2):
        for C in itertools.combinations(range(s), 2):
            cells = [(b, c) for b in B for c in C if (b, c) in sup]
            if len(cells) == 1:
                return SingletonWitness(B, C, cells[0])
    return None


@dataclass(frozen=True)
class Classification:
    sparsifiable: bool
    witness: Optional[SingletonWitness] = None

    def __str__(self) -> str:
        if self.sparsifiable:
            return "SPARSIFIABLE"
        w = self.witness
        return (f"NOT SPARSIFIABLE: B={{{w.left_pair[0]},{w.left_pair[1]}}} "
                f"C={{{w.right_pair[0]},{w.right_pair[1]}}} "
                f"cell=({w.supported_cell[0]},{w.supported_cell[1]})")


def classify(pred: KaryPredicate) -> Classification:
    witness = find_singleton_subpredicate(pred)
    if witness is None:
        return Classification(True)
    return Classification(False, witness)


def _box_corners(pred: KaryPredicate, positions, subdomains) -> set[Tuple_]:
    # corners of the sub-box hit by some supported tuple, whatever the other coordinates hold
    corners = set()
    for t in pred.support:
        corner = []
        for p, pair in zip(positions, subdomains):
            x = t[p]
            if x == pair[0]:
                corner.append(0)
            elif x == pair[1]:
                corner.append(1)
            else:
                break
        else:
            corners.add(tuple(corner))
    return corners


def find_singleton_lcube(pred: KaryPredicate, ell: int) -> Optional[CubeWitness]:
    """Search for a singleton ``ell``-cube.

    Positions, subdomain pairs, picked corner and filler are scanned in
    lexicographic order. For fixed positions and subdomains at most one
    corner can qualify, and the filler reported is the smallest one that
    completes it to a supported tuple.
    """
    k = pred.arity
    if not 2 <= ell <= k:
        raise BadCubeDim(f"cube dimension must lie in [2, {k}], got {ell}")
    for positions in itertools.combinations(range(k), ell):
        rest = [p for p in range(k) if p not in positions]
        pair_choices = [list(itertools.combinations(range(pred.domains[p]), 2)) for p in positions]
        for subdomains in itertools.product(*pair_choices):
            corners = _box_corners(pred, positions, subdomains)
            if len(corners) != 1:
                continue
            (picked,) = corners
            fillers = []
            for t in pred.support:
                if all(t[p] == pair[n] for p, pair, n in zip(positions, subdomains, picked)):
                    fillers.append(tuple(t[p] for p in rest))
            filler = min(fillers)
            return CubeWitness(positions, tuple(subdomains), picked, tuple(zip(rest, filler)))
    return None


def find_unused_label(pred: KaryPredicate) -> Optional[int]:
    if not pred.support:
        raise EmptySupport("unused labels are only meaningful for a nonempty support")
    if not pred.is_uniform:
        raise NonUniformDomains(f"unused label search needs a single domain, got {pred.domains}")
    used = {x for t in pred.support for x in t}
    for z in range(pred.domains[0]):
        if z not in used:
            return z
    return None


def cut(r: int = 2) -> KaryPredicate:
    if r < 2:
        raise BadParameters(f"cut needs r >= 2, got {r}")
    return KaryPredicate((r, r), [(x, y) for x in range(r) for y in range(r) if x != y])


def nae(k: int, r: int = 2) -> KaryPredicate:
    """Not-all-equal: every tuple except the r constant ones."""
    _check_kr(k, r)
    return KaryPredicate((r,) * k, [t for t in itertools.product(range(r), repeat=k) if len(set(t)) > 1])


def nor(k: int, r: int = 2) -> KaryPredicate:
    _check_kr(k, r)
    return KaryPredicate((r,) * k, [(0,) * k])


def parity(k: int, r: int = 2) -> KaryPredicate:
    _check_kr(k, r)
    return KaryPredicate((r,) * k, [t for t in itertools.product(range(r), repeat=k) if sum(t) % 2 == 0])


def _check_kr(k: int, r: int) -> None:
    if k < 2 or r < 2:
        raise BadParameters(f"need k >= 2 and r >= 2, got k={k}, r={r}")


BUILTINS = {"cut": cut, "nae": nae, "nor": nor, "parity": parity}


def make_builtin(kind: str, *params: int) -> KaryPredicate:
    """``make_builtin("cut", 3)``, ``make_builtin("nor", 3, 2)`` and so on."""
    try:
        factory = BUILTINS[kind]
    except KeyError:
        raise BadParameters(f"unknown builtin predicate {kind!r}") from None
    try:
        return factory(*params)
    except TypeError as exc:
        raise BadParameters(f"bad parameters for {kind}: {params}") from exc
