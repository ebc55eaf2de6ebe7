"""Exception hierarchy shared across the package.

Errors are grouped so the CLI can map them onto stable exit codes:
usage problems -> 1, data problems -> 2, anything else -> 3.
"""


class VizrecError(Exception):
    """Base class for all package errors."""


class UsageError(VizrecError):
    """Invalid invocation: bad task id, bad flag combination, bad config."""


class DataError(VizrecError):
    """Problems with user-supplied data (files, records, matrices)."""


class ParseError(DataError):
    """Malformed input file. Carries a human-readable location."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyInputError(DataError):
    """Input is syntactically fine but has nothing in it."""


class ChartSpecError(DataError):
    """Chart specification cannot be parsed or resolved."""


class ValidationError(DataError):
    """Inputs violate a documented contract (shape, vocabulary, manifest)."""


class ManifestMismatchError(ValidationError):
    """A persisted artifact was built against a different feature manifest."""


class RetryableError(VizrecError):
    """Transient network failure; the operation may be retried."""
