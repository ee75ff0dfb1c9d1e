"""Exception types shared across the package."""


class FibratioError(Exception):
    """Base class for all package-specific errors."""


class RejectedOrder(FibratioError, ValueError):
    """Recurrence order below 2."""


class RejectedLastWeightZero(FibratioError, ValueError):
    """Last weight is zero, so the recurrence degenerates to a lower order."""


class RejectedTrivial(FibratioError, ValueError):
    """All initial conditions are zero."""


class RejectedLength(FibratioError, ValueError):
    """Initial-condition vector length does not match the recurrence order."""


class ZeroRunBoundViolated(FibratioError, RuntimeError):
    """A run of n zeros appeared, which is impossible for nontrivial
    initial conditions with a nonzero last weight.  Signals an arithmetic
    bug, not a property of the input."""


class NoConvergence(FibratioError, RuntimeError):
    """Root iteration exhausted its budget.  ``best_roots`` and
    ``residuals`` carry the state at the last iteration."""

    def __init__(self, message, best_roots=None, residuals=None):
        super().__init__(message)
        self.best_roots = best_roots
        self.residuals = residuals


class RootModulusZero(FibratioError, ValueError):
    """Defensive: a zero root was passed where a valid root set can never
    contain one (the constant term is nonzero)."""


class ParseError(FibratioError, ValueError):
    """Malformed textual input.  ``position`` points at the offending
    character for scalar literals; ``raw`` preserves a malformed HTTP body."""

    def __init__(self, message, position=None, raw=None):
        super().__init__(message)
        self.position = position
        self.raw = raw


class NetworkUnavailable(FibratioError, RuntimeError):
    """Live lookup failed and no cached copy exists."""


class InsufficientTerms(FibratioError, ValueError):
    """An OEIS entry has too few terms to check the recurrence."""
