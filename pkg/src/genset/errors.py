"""Exception types shared by all modules."""


class GensetError(Exception):
    """Base class for library errors."""


class ParameterError(GensetError, ValueError):
    """Arguments violate an operation's preconditions."""


class BudgetError(GensetError):
    """An exhaustive computation would exceed its configured budget."""


class DataError(GensetError, ValueError):
    """Input data is inconsistent (e.g. a row outside the dual code)."""
