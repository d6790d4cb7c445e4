"""Utility functions for forensic agreement analysis."""
import math
import time
from datetime import datetime, timezone
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Dict, Optional, Union

from forensic_agreement.types import CommandMetadata

Number = Union[float, int, Decimal]


def create_metadata(
    source: str,
    start_time: float,
    additional_data: Optional[Dict[str, Any]] = None
) -> CommandMetadata:
    """Create metadata for command responses.

    Args:
        source: Name of the command that produced the response
        start_time: Start time for duration calculation
        additional_data: Additional metadata to include

    Returns:
        CommandMetadata object
    """
    duration = time.time() - start_time

    metadata: CommandMetadata = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "duration": duration,
        "source": source,
        "additional_data": additional_data
    }

    return metadata

def round_half_away(value: Number, decimals: int) -> Decimal:
    """Round to ``decimals`` places with halves going away from zero.

    Floats are rounded from their shortest repr, so 0.125 gives 0.13
    regardless of its binary expansion.
    """
    if not isinstance(value, Decimal):
        value = Decimal(repr(float(value)))
    return value.quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_UP)

def format_number(value: Number, decimals: int) -> str:
    """Format a number for display; NaN renders as ``nan``."""
    if math.isnan(float(value)):
        return "nan"
    rounded = round_half_away(value, decimals)
    if rounded == 0:
        rounded = abs(rounded)
    return f"{rounded:.{decimals}f}"

def format_percent(proportion: float, decimals: int = 1) -> str:
    """Format a proportion as a percentage, e.g. 0.7896 -> ``79.0%``."""
    if math.isnan(proportion):
        return "nan"
    return f"{format_number(Decimal(repr(float(proportion))) * 100, decimals)}%"

def validate_string_field(field: Any, field_name: str) -> None:
    """Validate that a field is a non-empty string.

    Args:
        field: Field to validate
        field_name: Name of the field for error messages

    Raises:
        ValueError: If validation fails
    """
    if not isinstance(field, str) or not field.strip():
        raise ValueError(f"{field_name} must be a non-empty string")
