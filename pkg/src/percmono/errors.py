class PercolationError(Exception):
    """Base class for errors raised by percmono."""


class InvalidParameter(PercolationError, ValueError):
    pass


class InvalidBracket(PercolationError, ValueError):
    """Raised when an interval does not bracket a sign change.

    ``details`` carries whatever was measured at the endpoints (polynomial
    values or Monte Carlo estimates) so the caller can report them.
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details


class BudgetExceeded(PercolationError):
    """A constructor or enumeration would exceed its configured size budget."""
