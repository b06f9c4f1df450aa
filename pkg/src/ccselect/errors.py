"""Exception hierarchy shared across the package."""


class SelectionError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(SelectionError, ValueError):
    """A configuration value violates its documented constraints."""


class InvalidDataError(SelectionError, ValueError):
    """Input data is malformed (non-finite entries, bad shapes, ...)."""


class InvalidLabelError(InvalidDataError):
    """A class label falls outside the declared label range."""


class DegenerateDataError(InvalidDataError):
    """Data admits no meaningful answer (e.g. all points identical)."""


class CsvParseError(InvalidDataError):
    """A CSV cell could not be parsed; carries row/column context."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if column is not None:
            loc.append(f"column {column!r}")
        if loc:
            message = f"{message} ({', '.join(loc)})"
        super().__init__(message)
        self.row = row
        self.column = column


class SubsetGuardError(InvalidParameterError):
    """Exhaustive search refused: the subset count exceeds the guard."""


class NumericalError(SelectionError):
    """A numerical routine failed (factorization breakdown, overflow)."""
