"""Good and generic sets over F_2, stopping sets and redundant parity checks."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:
    __version__ = "0.1.0"

from .errors import BudgetError, DataError, GensetError, ParameterError  # noqa: E402

__all__ = ["BudgetError", "DataError", "GensetError", "ParameterError", "__version__"]
