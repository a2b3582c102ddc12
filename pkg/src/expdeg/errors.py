"""Exception types shared across the package."""


class ExpDegError(Exception):
    """Base class for all domain errors raised by this package."""


class ValidationError(ExpDegError, ValueError):
    """Input is malformed (as opposed to well-formed but failing a predicate)."""


class ClassOverflow(ExpDegError):
    pass


class DimensionMismatch(ExpDegError):
    pass


class NoSuchComponent(ExpDegError, KeyError):
    pass


class UnsupportedTarget(ExpDegError):
    pass


class SearchBoundExceeded(ExpDegError):
    """A bounded search found nothing, but a larger bound would."""

    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


class ConditionUndefined(ExpDegError):
    pass


class NoLimit(ExpDegError):
    pass


class MultipleLimits(ExpDegError):
    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = list(witnesses)


class NoIntegralRoom(ExpDegError):
    pass


class SchemaError(ExpDegError, ValueError):
    """JSON input does not match the published schema.

    ``path`` is the list of keys/indices leading to the offending field.
    """

    def __init__(self, message, path=()):
        self.path = list(path)
        where = "/".join(str(p) for p in self.path) or "<root>"
        super().__init__(f"{where}: {message}")
