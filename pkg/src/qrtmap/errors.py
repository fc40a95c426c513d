"""Exception hierarchy shared by every module."""


class QRTError(Exception):
    """Base class for all errors raised by :mod:`qrtmap`."""


class DomainError(QRTError, ValueError):
    """An input lies outside the domain of an operation."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PrecisionError(QRTError, ArithmeticError):
    """A floating computation lost too much accuracy to be trusted."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class OutOfRangeError(DomainError):
    """A parameter falls outside the range where a formula is valid."""


class InternalError(QRTError, RuntimeError):
    """An internal consistency check failed."""
