"""Exception types shared across the package."""


class CrtreeError(Exception):
    """Base class for all package errors."""


class ParseError(CrtreeError, ValueError):
    """A delimited input file or schema document could not be parsed."""


class ValidationError(CrtreeError, ValueError):
    """Inputs violate a documented precondition or invariant."""
