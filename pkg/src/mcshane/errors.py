"""Exception types shared across the package."""


class McShaneError(Exception):
    """Base class for all package errors."""


class DomainError(McShaneError):
    """Input outside an operation's domain (zero vector, boundary point, ...)."""


class ClassificationError(McShaneError):
    """An isometry does not have the dynamical type an operation requires."""


class IllConditionedError(McShaneError):
    """Input is admissible but too close to a degenerate locus to trust."""


class DegenerateConfigurationError(McShaneError):
    """Coincident or collapsing point configuration.

    `limit` carries the axiom-consistent limit tag ("0", "1", "inf") when one
    exists.
    """

    def __init__(self, message, limit=None):
        super().__init__(message)
        self.limit = limit


class PreconditionError(McShaneError):
    """A documented precondition was violated."""


class ConstructionError(McShaneError):
    """A builder failed to produce an object satisfying its invariants."""


class UsageError(McShaneError):
    """Bad command-line or spec-string input (CLI exit code 64)."""
