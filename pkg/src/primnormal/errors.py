"""Exception types raised across the package."""


class PrimNormalError(Exception):
    """Base class for all errors raised by primnormal."""


class CapExceeded(PrimNormalError):
    """A configured size or iteration cap was hit before the work completed."""


class NotPrime(PrimNormalError, ValueError):
    pass


class NotADivisor(PrimNormalError, ValueError):
    pass


class ZeroElement(PrimNormalError, ValueError):
    pass


class FieldMismatch(PrimNormalError, ValueError):
    pass


class PreconditionViolated(PrimNormalError, ValueError):
    pass


class MixedClassification(PrimNormalError):
    """Raised when the 2-primitive elements of F_{q^2} are neither all normal nor all 1-normal."""
