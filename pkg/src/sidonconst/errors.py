"""Exception types raised by the package."""


class DomainError(ValueError):
    """Input outside the domain of an operation (duplicates, bad signs, ...)."""


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to reach its tolerance.

    ``bracket`` holds the offending interval when the failure comes from
    root refinement; ``diagnostics`` carries free-form context.
    """

    def __init__(self, message, bracket=None, diagnostics=None):
        super().__init__(message)
        self.bracket = bracket
        self.diagnostics = diagnostics or {}
