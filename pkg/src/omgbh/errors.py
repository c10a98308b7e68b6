"""Exception types raised by the package."""


class CompletePositivityError(ValueError):
    """A (tau, y) pair or parameter set does not define a completely positive map."""

    def __init__(self, message, tau=None, y=None):
        super().__init__(message)
        self.tau = tau
        self.y = y


class NotInBlackHoleRegionError(ValueError):
    """A channel point lies outside the black hole strip."""


class UnsupportedChannelError(ValueError):
    """The requested quantity is not defined for this channel class."""


class InternalInconsistencyError(ArithmeticError):
    """A quantity that must be non-negative came out negative beyond round-off."""


class TruncationSizeError(ValueError):
    """A truncated Fock space would exceed the dimension guard."""
