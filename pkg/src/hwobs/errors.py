"""Exception types shared across the package."""


class HWError(Exception):
    """Base class for all package errors."""


class ValidationError(HWError, ValueError):
    """An input violates a documented invariant (shape, Hermiticity, trace, ...)."""


class DimensionError(ValidationError):
    """Operand shapes or local dimensions do not match."""


class ParseError(HWError, ValueError):
    """A serialized document could not be parsed.

    ``line`` and ``field`` carry the location of the problem when known.
    """

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class InconsistencyError(HWError, RuntimeError):
    """An internal consistency check failed (e.g. probabilities outside [0, 1])."""
