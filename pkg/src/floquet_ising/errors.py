"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """A numerical routine produced an unusable result.

    Raised when an eigensolver result fails its residual or unit-modulus
    check, or an eigenbasis overlap denominator is too far from one. The
    message names the offending parameters so sweep logs stay actionable.
    """
