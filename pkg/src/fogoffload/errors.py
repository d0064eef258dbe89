"""Exception hierarchy shared by all fogoffload modules."""


class FogOffloadError(Exception):
    """Base class for all errors raised by this package."""


class StageNotInTechniqueError(FogOffloadError):
    """A stage was requested for a technique whose pipeline does not contain it."""


class MissingStageError(FogOffloadError):
    """A stage required by the technique's pipeline has no timing entry."""


class UnknownStageError(FogOffloadError):
    """A timing entry refers to a stage outside the technique's pipeline (or duplicates one)."""


class DegenerateInputError(FogOffloadError):
    """Training data is too small or contains non-finite values."""


class TermExplosionError(FogOffloadError):
    """Polynomial expansion would exceed the configured column cap."""


class DimensionMismatchError(FogOffloadError):
    """An input vector does not match the feature count a model was trained with."""


class EmptySweepError(FogOffloadError):
    """A sweep configuration has no blocks or an empty axis."""


class EmptyDatasetError(FogOffloadError):
    """No records remain after filtering a dataset for training."""


class MalformedRecordError(FogOffloadError):
    """A record is missing a stage time required for individual-model training."""


class LengthMismatchError(FogOffloadError):
    """Paired metric vectors have different lengths."""


class TooFewRecordsError(FogOffloadError):
    """Not enough records to perform a train/test split."""


class KTooLargeError(FogOffloadError):
    """Requested fold count is invalid for the dataset size."""


class SchemaMismatchError(FogOffloadError):
    """A file header does not match the expected fixed schema."""


class ParseError(FogOffloadError):
    """A file row could not be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class InvariantViolationError(FogOffloadError):
    """File content violates a dataset invariant (for example, inconsistent totals)."""


class ConfigError(FogOffloadError):
    """A configuration document is malformed, has unknown keys, or an unsupported version."""
