"""Exceptions for forensic agreement analysis."""
from typing import Optional


class AgreementError(Exception):
    """Base exception for agreement-analysis errors."""
    pass

class ConfigurationError(AgreementError):
    """Raised when a run configuration is invalid."""
    pass

class ExecutionError(AgreementError):
    """Raised when command execution fails."""
    pass

class ValidationError(AgreementError):
    """Raised when input data fails validation."""
    pass

class InvalidArgumentError(ValidationError):
    """Raised for an argument outside its accepted values."""
    pass

class InvalidSchemeError(ValidationError):
    """Raised when a category or pooling scheme is malformed."""
    pass

class SchemeMismatchError(ValidationError):
    """Raised when a table does not use the expected category scheme."""
    pass

class NonSquareError(ValidationError):
    """Raised when a count matrix is not square."""
    pass

class NegativeCountError(ValidationError):
    """Raised when a count matrix holds a negative entry."""
    pass

class ZeroTotalError(ValidationError):
    """Raised when a count matrix sums to zero."""
    pass

class DimensionMismatchError(ValidationError):
    """Raised when matrix size and scheme size differ."""
    pass

class RecordError(ValidationError):
    """Base exception for evaluation-record errors, tagged with the input line."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

class MalformedRowError(RecordError):
    """Raised when a records row cannot be parsed."""
    pass

class DuplicateRecordError(RecordError):
    """Raised when (examiner_id, set_id, round) repeats."""
    pass

class UnknownLabelError(RecordError):
    """Raised when a conclusion is not a label of the active scheme."""
    pass

class InconsistentSetError(RecordError):
    """Raised when ground truth or material changes within one set."""
    pass

class DataShapeError(ValidationError):
    """Raised when records do not have the expected pairing shape."""
    pass

class NoInformationError(ValidationError):
    """Raised when a sign test has no nonzero differences."""
    pass

class NotInterpretableError(ValidationError):
    """Raised when a degenerate kappa is interpreted."""
    pass

class EmptyInputError(ValidationError):
    """Raised when an operation receives no data."""
    pass
