"""Tests and interpretive scales for collections of per-examiner summaries."""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Literal, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.stats import binomtest

from forensic_agreement.exceptions import (
    EmptyInputError,
    InvalidArgumentError,
    NoInformationError,
    NotInterpretableError,
)


class SignTestResult(BaseModel):
    """One-sided sign test of observed-minus-expected differences."""

    model_config = ConfigDict(frozen=True)

    n_positive: int
    n_negative: int
    n_zero: int
    n_effective: int
    p_value: float
    alternative: Literal["greater"] = "greater"

    def machine_line(self) -> str:
        return (
            f"signtest n_positive={self.n_positive} n_negative={self.n_negative} "
            f"n_zero={self.n_zero} n_effective={self.n_effective} p_value={self.p_value!r} "
            f"alternative={self.alternative}"
        )


def sign_test(differences: Sequence[float]) -> SignTestResult:
    """Exact sign test of "observed exceeds expected more than half the time".

    Zero differences are dropped and reported in ``n_zero``. The p-value is
    the exact binomial upper tail P(X >= n_positive) with X ~ Bin(n_effective, 1/2).

    Raises:
        NoInformationError: If every difference is zero
    """
    values = [float(d) for d in differences]
    if any(math.isnan(d) for d in values):
        raise InvalidArgumentError("differences must not be NaN")
    n_positive = sum(1 for d in values if d > 0)
    n_negative = sum(1 for d in values if d < 0)
    n_zero = len(values) - n_positive - n_negative
    n_effective = n_positive + n_negative
    if n_effective == 0:
        raise NoInformationError("all differences are zero; the sign test has no information")
    p_value = binomtest(n_positive, n_effective, 0.5, alternative="greater").pvalue
    return SignTestResult(
        n_positive=n_positive,
        n_negative=n_negative,
        n_zero=n_zero,
        n_effective=n_effective,
        p_value=float(p_value),
    )


class BandLabel(str, Enum):
    NONE = "None"
    MINIMAL = "Minimal"
    WEAK = "Weak"
    MODERATE = "Moderate"
    STRONG = "Strong"
    ALMOST_PERFECT = "AlmostPerfect"


@dataclass(frozen=True)
class KappaBand:
    """Interpretation band covering kappa values in [lower, upper)."""

    label: BandLabel
    lower: float
    upper: float

    def __contains__(self, kappa: float) -> bool:
        if self.label is BandLabel.ALMOST_PERFECT:
            return self.lower <= kappa <= self.upper
        return self.lower <= kappa < self.upper


# Lower edges are inclusive, so 0.80 is Strong and 0.90 is AlmostPerfect.
KAPPA_BANDS: Tuple[KappaBand, ...] = (
    KappaBand(BandLabel.NONE, -math.inf, 0.21),
    KappaBand(BandLabel.MINIMAL, 0.21, 0.40),
    KappaBand(BandLabel.WEAK, 0.40, 0.60),
    KappaBand(BandLabel.MODERATE, 0.60, 0.80),
    KappaBand(BandLabel.STRONG, 0.80, 0.90),
    KappaBand(BandLabel.ALMOST_PERFECT, 0.90, 1.0),
)

BAND_CONVENTION = "kappa bands include their lower edge (0.80 -> Strong, 0.90 -> AlmostPerfect)"


def interpret_kappa(kappa: float) -> KappaBand:
    """Map kappa onto its interpretation band; negatives fall in None.

    Raises:
        NotInterpretableError: If kappa is the degenerate NaN flag
        InvalidArgumentError: If kappa exceeds 1
    """
    if math.isnan(kappa):
        raise NotInterpretableError("kappa is degenerate (expected agreement of 1)")
    if kappa > 1.0 + 1e-12:
        raise InvalidArgumentError(f"kappa {kappa} exceeds 1")
    for band in KAPPA_BANDS:
        if kappa in band:
            return band
    return KAPPA_BANDS[-1]


def kappa_isoline(kappa: float, p_expected: float) -> float:
    """Observed agreement on the constant-kappa line: (1 - kappa) * P_e + kappa."""
    return (1.0 - kappa) * p_expected + kappa


@dataclass(frozen=True)
class BoxStats:
    """Tukey five-number summary with 1.5 IQR whiskers."""

    whisker_low: float
    q1: float
    median: float
    q3: float
    whisker_high: float
    outliers: Tuple[float, ...]

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1


def box_stats(values: Sequence[float]) -> BoxStats:
    """Tukey hinges and whiskers for a nonempty list.

    Hinges are the medians of the lower and upper halves, each half including
    the overall median when the count is odd.
    """
    if len(values) == 0:
        raise EmptyInputError("box_stats needs at least one value")
    data = np.sort(np.asarray(values, dtype=np.float64))
    n = len(data)
    q1 = float(np.median(data[: (n + 1) // 2]))
    q3 = float(np.median(data[n // 2:]))
    spread = 1.5 * (q3 - q1)
    low_fence, high_fence = q1 - spread, q3 + spread
    inside = data[(data >= low_fence) & (data <= high_fence)]
    outliers = data[(data < low_fence) | (data > high_fence)]
    return BoxStats(
        whisker_low=float(inside.min()),
        q1=q1,
        median=float(np.median(data)),
        q3=q3,
        whisker_high=float(inside.max()),
        outliers=tuple(outliers.tolist()),
    )
