"""Exception types shared across the package."""


class SpmdiagError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SpmdiagError):
    """Input data violates a structural invariant (bad tree, bad rank, bad value)."""


class ParseError(SpmdiagError):
    """A file could not be parsed; the message carries file and line/field context."""


class DegenerateVectorError(SpmdiagError):
    """A performance vector has zero length, so dissimilarity severity is undefined."""
