"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Non-finite entries, wrong shapes or otherwise malformed arguments."""


class BranchPointError(ValueError):
    """Energy sits exactly on a switch between trigonometric and hyperbolic forms."""


class RangeError(ArithmeticError):
    """A quantity left the representable range (overflow in expm or in a product)."""


class StrideTooLargeError(RangeError):
    """Products between two re-orthonormalizations overflowed; use a smaller stride."""


class InvalidSeedError(ValueError):
    """A Lie algebra seed does not lie in sp_2(R)."""


class OutOfRegimeError(ValueError):
    """Energy lies outside the range where a certificate is defined."""


class DegenerateEnergyError(ArithmeticError):
    """A normalization divisor vanishes at this energy."""

    def __init__(self, message, energy=None):
        super().__init__(message)
        self.energy = energy


class InvalidIntervalError(ValueError):
    """A root-search interval straddles a branch point or is empty."""
