"""Shared exception types."""


class DomainError(ValueError):
    """Input outside the mathematical domain of the operation."""


class PrecisionError(ArithmeticError):
    """Not enough p-adic precision to decide the question.

    Callers are expected to retry at higher working precision or a larger
    truncation order.
    """


class RecenterRequired(Exception):
    """A series-ring division hit a non-unit; expand around another point."""
