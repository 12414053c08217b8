"""Exception types shared across the package."""


class ReloadTreeError(Exception):
    """Base class for all package errors."""


class InvalidGraphError(ReloadTreeError):
    pass


class InvalidPathError(ReloadTreeError):
    pass


class NotATreeError(ReloadTreeError):
    pass


class DisconnectedGraphError(ReloadTreeError):
    pass


class NotACactusError(ReloadTreeError):
    def __init__(self, message, block=None):
        super().__init__(message)
        self.block = block


class ParseError(ReloadTreeError):
    """Malformed input; ``kind`` is ``"symmetry"`` for an asymmetric cost matrix, else ``"format"``."""

    def __init__(self, message, line=None, kind="format"):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
        self.kind = kind


class BudgetExceededError(ReloadTreeError):
    """Raised when an exhaustive search would exceed its enumeration budget."""


class ResourceLimitError(ReloadTreeError):
    """Raised when a dynamic-programming table grows past its configured cap."""


class DecompositionError(ReloadTreeError):
    pass


class ReductionError(ReloadTreeError):
    """A source instance violates a reduction precondition.

    ``clause`` (0-based) or ``variable`` locate the offending part when known.
    """

    def __init__(self, message, clause=None, variable=None):
        super().__init__(message)
        self.clause = clause
        self.variable = variable
