"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented precondition (shape, structure, range)."""


class SolverError(RuntimeError):
    """An iterative solver could not produce a usable result."""
