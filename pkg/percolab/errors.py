"""Exception hierarchy for percolab.

Library code raises these; the command line and the Flask API translate
them into exit codes and JSON error bodies.
"""

from __future__ import annotations


class PercolabError(ValueError):
    """Base class for every error raised on bad input or infeasible requests."""


class GraphBuildError(PercolabError):
    """An edge list violates the simple-graph invariants."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None) -> None:
        super().__init__(message if pair is None else f"{message}: {pair}")
        self.pair = pair


class EdgeListFormatError(PercolabError):
    """The edge-list text is malformed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class GeneratorError(PercolabError):
    """Generator parameters are infeasible."""


class RetryBudgetExhausted(GeneratorError):
    pass


class PatternTooLargeError(PercolabError):
    pass


class OracleLimitError(PercolabError):
    """An exponential oracle was asked for an instance above its cap."""


class ProbabilityError(PercolabError):
    pass


class TraceLengthError(PercolabError):
    pass


class BaseMismatchError(PercolabError):
    """A sample was drawn from a different base graph."""


class UsageError(PercolabError):
    """Bad command-line or API arguments."""
