"""Exception types shared across the package."""


class InvsemiError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(InvsemiError, ValueError):
    """Objects over mismatched ambient sets (or index sets) were combined."""


class DomainError(InvsemiError, ValueError):
    """An argument lies outside the domain a function requires."""


class BudgetError(InvsemiError, RuntimeError):
    """An enumeration or search would exceed the configured resource budget."""
