"""Exception hierarchy shared across the package."""


class RedsError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(RedsError, ValueError):
    pass


class EmptyDomainError(RedsError):
    pass


class ConfigError(RedsError, ValueError):
    pass


class InvalidTraceError(RedsError, ValueError):
    pass


class InsufficientDataError(RedsError, ValueError):
    pass


class NumericalDegeneracyError(RedsError):
    """Cholesky factorization failed even at the largest jitter."""

    def __init__(self, message, jitter):
        super().__init__(f"{message} (last jitter tried: {jitter:g})")
        self.jitter = jitter
