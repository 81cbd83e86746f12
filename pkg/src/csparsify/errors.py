"""Exception hierarchy.

Every error raised on purpose by the library derives from ``CspError`` so the
CLI can map it to exit code 2 in one place.
"""


class CspError(ValueError):
    pass


# predicates
class NotBinary(CspError):
    pass


class PairOutOfRange(CspError):
    pass


class DomainTooSmall(CspError):
    pass


class BadCubeDim(CspError):
    pass


class EmptySupport(CspError):
    pass


class NonUniformDomains(CspError):
    pass


class BadParameters(CspError):
    pass


# instances and graphs
class InvalidAssignment(CspError):
    pass


class ArityMismatch(CspError):
    pass


class TooLarge(CspError):
    pass


class NotBipartite(CspError):
    pass


class VertexOutOfRange(CspError):
    pass


class NotAPartition(CspError):
    pass


# covers
class NotSparsifiable(CspError):
    pass


class InternalBicliqueViolation(AssertionError):
    """The complement of the support graph is not a union of bicliques.

    Only reachable through a bug: for predicates without a singleton 2x2
    restriction the structure is guaranteed.
    """


class NotSingleton(CspError):
    pass


# sparsification
class BadEpsilon(CspError):
    pass


class NotASubgraphOfCover(CspError):
    pass


class NotSparsifiablePredicate(CspError):
    pass


class NotASubinstance(CspError):
    pass


# hardness
class InvalidWitness(CspError):
    pass


class ZeroValueAssignment(CspError):
    pass


class NoUnusedLabel(CspError):
    pass


# serialization
class FormatError(CspError):
    pass
