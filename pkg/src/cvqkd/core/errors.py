"""
Exception hierarchy for the reconciliation simulator.

Every exception carries an ``error_code`` from ``core.constants`` so that the
CLI and telemetry can report failures as structured ``{"error_code", "message"}``
payloads. Decoder non-convergence is never raised; it is reported through
``DecodeOutcome.converged``.
"""

from typing import Any, Dict, Optional

from cvqkd.core.constants import (
    ERROR_CODE_ALIST_PARSE,
    ERROR_CODE_CONFIGURATION,
    ERROR_CODE_DEGENERATE_SEGMENT,
    ERROR_CODE_DEGENERATE_STATE,
    ERROR_CODE_DOMAIN,
    ERROR_CODE_ENCODING_SETUP,
    ERROR_CODE_PARAMETER,
    ERROR_CODE_PROFILE,
    ERROR_CODE_SEARCH,
    ERROR_CODE_THRESHOLD,
    ERROR_CODE_UNSUPPORTED_DIMENSION,
)


class ReconciliationError(Exception):
    """Base class for all simulator errors."""

    error_code = ERROR_CODE_PARAMETER

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        payload: Dict[str, Any] = {
            "error_code": self.error_code,
            "message": self.message,
        }
        payload.update(self.details)
        return payload


class ParameterError(ReconciliationError, ValueError):
    """An argument is outside its documented range."""

    error_code = ERROR_CODE_PARAMETER


class DegenerateSegmentError(ParameterError):
    error_code = ERROR_CODE_DEGENERATE_SEGMENT


class UnsupportedDimensionError(ParameterError):
    error_code = ERROR_CODE_UNSUPPORTED_DIMENSION

    def __init__(self, dimension: int):
        super().__init__(
            f"Dimension {dimension} not supported; use one of 1, 2, 4, 8",
            dimension=dimension,
        )
        self.dimension = dimension


class AlistParseError(ReconciliationError):
    """Malformed alist text; ``line_number`` is 1-indexed."""

    error_code = ERROR_CODE_ALIST_PARSE

    def __init__(self, message: str, line_number: Optional[int] = None):
        where = f" (line {line_number})" if line_number is not None else ""
        super().__init__(f"{message}{where}", line_number=line_number)
        self.line_number = line_number


class EncodingSetupError(ReconciliationError):
    """The parity-check matrix cannot be brought to systematic form."""

    error_code = ERROR_CODE_ENCODING_SETUP

    def __init__(self, message: str, rank: int, rows: int):
        super().__init__(f"{message}: rank {rank} < {rows} rows", rank=rank, rows=rows)
        self.rank = rank
        self.rows = rows


class ProfileError(ParameterError):
    error_code = ERROR_CODE_PROFILE


class DomainError(ParameterError):
    error_code = ERROR_CODE_DOMAIN


class DegenerateStateError(ParameterError):
    error_code = ERROR_CODE_DEGENERATE_STATE


class ConfigurationError(ParameterError):
    error_code = ERROR_CODE_CONFIGURATION


class SearchError(ReconciliationError):
    """A root or threshold search failed to bracket its target."""

    error_code = ERROR_CODE_SEARCH


class ThresholdNotBracketedError(SearchError):
    error_code = ERROR_CODE_THRESHOLD
