"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`PamError`,
which is itself a :class:`ValueError` so callers validating user input can
catch either.
"""


class PamError(ValueError):
    """Base class for all package errors."""


class NotPowerOfTwoError(PamError):
    pass


class OrderTooSmallError(PamError):
    pass


class OrderTooLargeError(PamError):
    """Exhaustive work refused for this constellation order."""


class WrongWeightError(PamError):
    """A bit vector does not have Hamming weight M/2."""


class OutOfRangeError(PamError):
    pass


class UndefinedForOrderError(PamError):
    """A named labeling has no definition for the requested order."""


class NotABijectionError(PamError):
    """Labeling columns do not give M distinct binary labels."""


class WrongCountError(PamError):
    pass


class WrongOrderError(PamError):
    """A closed-form routine was called with the wrong constellation order."""


class AsymmetricPatternError(PamError):
    """Closed-form 8-PAM thresholds requested for an ASY pattern."""


class NumericalFailure(PamError):
    pass


class UnresolvedVirtualError(PamError):
    """A virtual threshold does not carry its partner's value."""


class InconsistentLabelsError(PamError):
    pass
