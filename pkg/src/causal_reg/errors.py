"""Exception hierarchy. Every error carries the CLI exit code it maps to."""

from __future__ import annotations


class CausalRegError(Exception):
    """Base class for all library errors."""

    exit_code: int = 1


# ── Configuration (exit 2) ────────────────────────────────────


class ConfigError(CausalRegError):
    exit_code = 2


class InvalidGrid(ConfigError):
    """λ grid is empty, unsorted, negative, or has repeats."""


class TooManyFolds(ConfigError):
    """More folds requested than observations in an environment."""


class PreconditionError(ConfigError):
    """A closed form was asked for outside the assumptions it holds under."""


# ── Data (exit 3) ─────────────────────────────────────────────


class DataError(CausalRegError):
    exit_code = 3


class InvalidInput(DataError, ValueError):
    """Malformed or non-finite numeric input."""


class TooFewObservations(DataError):
    pass


class DegenerateResample(DataError):
    pass


class MissingColumn(DataError):
    def __init__(self, column: str) -> None:
        super().__init__(f"missing column {column!r}")
        self.column = column


class NonNumericCell(DataError):
    def __init__(self, row: int, column: str) -> None:
        super().__init__(f"non-numeric cell at row {row}, column {column!r}")
        self.row = row
        self.column = column


class UnknownLabel(DataError):
    def __init__(self, label: str) -> None:
        super().__init__(f"unknown environment label {label!r}")
        self.label = label


class EmptyEnvironment(DataError):
    def __init__(self, label: str) -> None:
        super().__init__(f"environment {label!r} has no rows")
        self.label = label


class EmptyTable(DataError):
    pass


# ── Numerical (exit 4) ────────────────────────────────────────


class NumericalError(CausalRegError):
    exit_code = 4


class NotPositiveSemidefinite(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass


class SingularStructure(NumericalError):
    """I − B is singular, so the SEM has no unique solution."""
