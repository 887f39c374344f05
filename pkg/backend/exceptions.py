"""
Error hierarchy for depthlab.

Every error raised on purpose by the library derives from
:class:`DepthLabError`. Input-validation errors also derive from
``ValueError`` so callers that only know the builtin still catch them.
The CLI controller maps the two families below to exit codes:
configuration/usage problems exit with 2, data problems with 3.
"""


class DepthLabError(Exception):
    """Base class for all depthlab errors."""


class DataError(DepthLabError, ValueError):
    """Base class for errors caused by the data or parameters supplied."""


class DimensionMismatchError(DataError):
    """Point and dataset dimensions disagree, or a method needs another d."""


class SizeLimitError(DataError):
    """The exact combinatorial algorithm was asked for more than it allows."""


class EmptyInputError(DataError):
    """An empty dataset, point list or input file."""


class DatasetParseError(DataError):
    """A dataset file could not be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line_number: int) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.line_number: int = line_number


class NonFiniteValueError(DataError):
    """A coordinate is NaN or infinite."""


class DomainError(DataError):
    """A parameter lies outside the mathematical domain of an operation."""


class GridSpecError(DataError):
    """An evaluation grid is too small or has an empty extent."""


class InsufficientDataError(DataError):
    """Too few observations for the requested procedure."""


class ModelError(DataError):
    """An invalid sequence-space model (nonpositive or missing sigma)."""


class UsageError(DepthLabError):
    """Invalid combination of command-line flags."""


class ConfigError(DepthLabError, ValueError):
    """Unknown distribution id or malformed study configuration."""
