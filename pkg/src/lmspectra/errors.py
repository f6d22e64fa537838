"""Exception types shared by every module."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class InsufficientPrecision(ArithmeticError):
    """An enclosure is too wide to decide a comparison; deepen the input."""


class BudgetExceeded(RuntimeError):
    """A search hit its node, depth or time cap before finishing."""
