"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Matrix or vector shapes do not fit the operation."""


class Graph6Error(ValueError):
    """Malformed graph6 (or adjacency text) input."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class PreconditionError(ValueError):
    """An operation was called on input outside its domain."""


class AssemblyError(ValueError):
    """Representatives could not be assembled into a primitive matrix."""


class TheoryViolation(RuntimeError):
    """A result contradicts a proven property; always an implementation bug."""


class InconsistencyError(ValueError):
    """Two graphs cannot be related by a regular rational orthogonal matrix."""
