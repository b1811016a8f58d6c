"""Shared exception types."""


class ContractViolationError(RuntimeError):
    """An internal invariant that should be unreachable was violated."""


class UncoveredFactorError(ContractViolationError):
    """A factor survived every index interval of a divisor-set pair."""


class ResourceBudgetError(RuntimeError):
    """An exhaustive search exceeded its configured step budget."""
