"""Exception hierarchy.

Every error raised on bad input derives from ``ValueError`` so callers that
only care about "the data was wrong" can catch that.
"""


class CointForecastError(Exception):
    """Base class for all package errors."""


class DataFormatError(CointForecastError, ValueError):
    pass


class EmptyDataError(CointForecastError, ValueError):
    pass


class AlignmentError(CointForecastError, ValueError):
    pass


class DegenerateSeriesError(CointForecastError, ValueError):
    pass


class InsufficientDataError(CointForecastError, ValueError):
    pass


class SplitError(CointForecastError, ValueError):
    pass


class DomainError(CointForecastError, ValueError):
    """Input outside the mathematical domain of an operation."""


class DegenerateRegressionError(CointForecastError, ValueError):
    pass


class SingularMatrixError(CointForecastError, ValueError):
    pass


class UndefinedCorrelationError(CointForecastError, ValueError):
    pass


class InsufficientCandidatesError(CointForecastError, ValueError):
    pass


class ShapeError(CointForecastError, ValueError):
    pass


class ConfigError(CointForecastError, ValueError):
    pass


class TrainingError(CointForecastError, RuntimeError):
    def __init__(self, message, epoch=None):
        super().__init__(message)
        self.epoch = epoch


class UndefinedSharpeError(CointForecastError, ValueError):
    pass


class TableChecksumError(CointForecastError, RuntimeError):
    pass


class StageError(CointForecastError, RuntimeError):
    """Wraps a failure inside an experiment pipeline with the stage name."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
