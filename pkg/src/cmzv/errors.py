"""Exception types shared across the package."""


class CmzvError(Exception):
    """Base class for all package-specific errors."""


class DomainError(CmzvError, ValueError):
    """An input is outside the mathematical domain of the operation."""


class WordEncodingError(DomainError):
    """A word over {x, y} cannot be decoded or evaluated as requested."""


class DivergenceError(DomainError):
    """The requested integral or series diverges."""


class RewriteError(CmzvError):
    """A symbolic rewrite step was applied outside its precondition."""


class CapacityError(CmzvError):
    """A configured cap (depth, step budget, panel limit) was exceeded."""
