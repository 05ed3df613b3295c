"""Exception hierarchy shared by all modules."""


class AlterknotError(Exception):
    """Base class for every error raised by the package."""


class DiagramError(AlterknotError):
    """A diagram code could not be turned into a valid diagram."""


class MalformedCode(DiagramError):
    pass


class LabelMismatch(DiagramError):
    pass


class NonPlanar(DiagramError):
    pass


class Unrealizable(DiagramError):
    pass


class NotAKnot(DiagramError):
    """The code describes a link with more than one component."""


class NotBipartiteDual(DiagramError):
    pass


class PreconditionError(AlterknotError, ValueError):
    """An operation was called outside its documented domain."""


class NotReduced(PreconditionError):
    pass


class NotPrime(PreconditionError):
    pass


class NotAlternating(PreconditionError):
    pass


class NotTwistReduced(PreconditionError):
    pass


class ThresholdViolation(PreconditionError):
    pass


class DomainError(PreconditionError):
    pass


class DerivationMismatch(AlterknotError):
    """A re-derived constant does not satisfy the stated inequality."""


class IncompleteEnumeration(AlterknotError):
    """The denominator cutoff cannot guarantee every short arc was found."""
