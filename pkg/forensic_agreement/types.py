"""Type definitions for forensic agreement analysis."""
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Tuple, TypedDict

from pydantic import BaseModel, ConfigDict, Field, field_validator

from forensic_agreement.categories import SCORING_SCHEMES

DEFAULT_SEED = 20220527
"""Seed used when ``--seed`` is not given; never derived from the clock."""

GENERATOR_ID = "numpy.PCG64"


class Material(str, Enum):
    """Specimen material; tables never mix materials."""

    BULLET = "bullet"
    CARTRIDGE = "cartridge"

class Stratum(str, Enum):
    """Ground truth of a comparison set."""

    MATCHING = "matching"
    NONMATCHING = "nonmatching"

class GroupBy(str, Enum):
    """How paired evaluations are grouped into tables."""

    POOLED_OVER_SUBJECTS = "pooled_over_subjects"
    PER_SUBJECT = "per_subject"

class Axis(str, Enum):
    """Table axis for marginal computation."""

    ROWS = "rows"
    COLS = "cols"

class SummaryFormat(str, Enum):
    """Rendering formats for agreement summaries."""

    TEXT = "text"
    CSV = "csv"
    JSON = "json"

Subcommand = Literal["stats", "pool", "analyze", "model", "simulate", "signtest", "plot"]

class CommandMetadata(TypedDict):
    """Metadata for command responses."""

    timestamp: str
    duration: float
    source: str
    additional_data: Optional[Dict[str, Any]]

@dataclass
class CommandResponse:
    """Response type for command execution."""

    success: bool
    data: Optional[Any] = None
    error: Optional[str] = None
    exit_code: int = 0
    metadata: Optional[CommandMetadata] = None

class RunConfig(BaseModel):
    """Validated options for one CLI invocation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    subcommand: Subcommand
    table: Optional[Path] = None
    records: Optional[Path] = None
    points: Optional[Path] = None
    input: Optional[Path] = None
    scheme: Literal["auto", "afte"] = "auto"
    pooling: str = "none"
    out: Optional[Path] = None
    decimals: int = Field(default=1, ge=0, le=10)
    kappa_decimals: int = Field(default=4, ge=0, le=12)
    format: SummaryFormat = SummaryFormat.TEXT
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    exclude: Tuple[str, ...] = ()
    pi: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    p: Optional[Tuple[float, ...]] = None
    n: Optional[int] = Field(default=None, ge=1)
    labels: Optional[Tuple[str, ...]] = None
    isolines: Tuple[float, ...] = (0.0, 0.8)
    title: str = ""

    @field_validator("isolines")
    @classmethod
    def _isolines_in_unit_interval(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        for kappa in value:
            if not 0.0 <= kappa <= 1.0:
                raise ValueError(f"isoline kappa {kappa} outside [0, 1]")
        return value

    def input_paths(self) -> Dict[str, Path]:
        """Return the input paths this configuration names."""
        paths = {
            "table": self.table,
            "records": self.records,
            "points": self.points,
            "input": self.input,
        }
        if self.pooling not in SCORING_SCHEMES:
            paths["pooling"] = Path(self.pooling)
        return {name: path for name, path in paths.items() if path is not None}
