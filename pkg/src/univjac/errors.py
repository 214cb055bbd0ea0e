"""Exception hierarchy shared by all modules."""


class UnivJacError(Exception):
    """Base class for every error raised by this package."""


class Disconnected(UnivJacError, ValueError):
    pass


class InvalidGraph(UnivJacError, ValueError):
    pass


class EmptySubset(UnivJacError, ValueError):
    pass


class DisconnectedInducedSubgraph(UnivJacError, ValueError):
    pass


class TooLarge(UnivJacError):
    pass


class UnknownEdge(UnivJacError, IndexError):
    pass


class UnstablePair(UnivJacError, ValueError):
    """(g, n) is not hyperbolic, i.e. 2g - 2 + n <= 0."""


NotHyperbolic = UnstablePair


class NotInDomain(UnivJacError, ValueError):
    pass


class UnstableVertex(UnivJacError, ValueError):
    pass


class NotRealized(UnivJacError, ValueError):
    pass


class MissingTriple(UnivJacError, KeyError):
    pass


class IncompatibleDecomposition(UnivJacError, ValueError):
    pass


class TypeMismatch(UnivJacError, TypeError):
    pass


class Conflict(UnivJacError, ValueError):
    def __init__(self, triple, first, second):
        super().__init__(f"conflicting values at {triple}: {first} != {second}")
        self.triple = triple
        self.values = (first, second)


class Incomplete(UnivJacError, ValueError):
    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__(f"{len(self.missing)} triples not covered, e.g. {self.missing[:3]}")


class NotMorphismCompatible(UnivJacError, ValueError):
    pass


class NonGeneric(UnivJacError, ValueError):
    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class FiberDisagreement(UnivJacError, ValueError):
    pass


class ResourceLimit(UnivJacError):
    pass


class SeparatingEdgeModeUnsupported(UnivJacError, ValueError):
    pass


class ParseError(UnivJacError, ValueError):
    pass


class OutOfScope(UnivJacError, ValueError):
    """Requested computation lies outside the supported range (e.g. genus below 2)."""
