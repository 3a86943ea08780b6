"""Exception types shared across the package.

The CLI maps these onto process exit codes: validation problems exit with 2,
numerical degeneracy with 3, and exceeded enumeration budgets with 4.
"""


class ValidationError(ValueError):
    """Bad input: shapes, ranges, or unreadable/malformed data."""


class DegeneracyError(RuntimeError):
    """Numerically degenerate problem (zero response, no usable candidates)."""


class BudgetExceededError(RuntimeError):
    """A combinatorial enumeration would exceed the configured budget."""
