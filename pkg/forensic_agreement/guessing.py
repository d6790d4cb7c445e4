"""Shrewd-guessing model of a rater: closed-form agreement table and simulation.

A rater perceives the true category a fraction ``pi`` of the time and
otherwise guesses from the known category distribution ``p``. Guessing
happens at the same positions in both rounds, so the model's kappa equals
``pi`` exactly.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from forensic_agreement.agreement import AgreementTable, ProportionTable, cohen_kappa
from forensic_agreement.categories import CategoryScheme
from forensic_agreement.exceptions import InvalidArgumentError
from forensic_agreement.types import GENERATOR_ID

Seed = Union[int, np.random.SeedSequence]


class GuessingModel(BaseModel):
    """Precise-perception rate ``pi`` and category distribution ``p``."""

    model_config = ConfigDict(frozen=True)

    pi: float = Field(ge=0.0, le=1.0)
    p: Tuple[float, ...]
    labels: Optional[Tuple[str, ...]] = None

    @field_validator("p")
    @classmethod
    def _p_is_distribution(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        if len(value) < 2:
            raise ValueError("p needs at least 2 categories")
        if any(not math.isfinite(x) or x < 0 for x in value):
            raise ValueError("p entries must be finite and non-negative")
        total = math.fsum(value)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"p must sum to 1, got {total!r}")
        return tuple(x / total for x in value)

    @model_validator(mode="after")
    def _labels_match_p(self) -> "GuessingModel":
        if self.labels is not None and len(self.labels) != len(self.p):
            raise ValueError(f"{len(self.labels)} labels for {len(self.p)} categories")
        return self

    @property
    def gamma(self) -> float:
        """Guessing rate, always ``1 - pi``."""
        return 1.0 - self.pi

    @property
    def scheme(self) -> CategoryScheme:
        if self.labels is not None:
            return CategoryScheme(self.labels)
        return CategoryScheme(tuple(f"C{i + 1}" for i in range(len(self.p))))


def model_table(model: GuessingModel) -> ProportionTable:
    """Closed-form table: pi*p_i + gamma*p_i^2 on the diagonal, gamma*p_i*p_j off it."""
    p = np.asarray(model.p)
    props = model.gamma * np.outer(p, p) + model.pi * np.diag(p)
    return ProportionTable(scheme=model.scheme, props=props)


def model_kappa(model: GuessingModel) -> Optional[float]:
    """Kappa of the model, which is ``pi``; None when p sits on one category."""
    if 1.0 - math.fsum(x * x for x in model.p) < 1e-12:
        return None
    return model.pi


def model_stream(seed: int, index: int) -> np.random.SeedSequence:
    """Independent seed stream for the ``index``-th model of a sweep."""
    return np.random.SeedSequence(seed, spawn_key=(index,))


def _tabulate(first: np.ndarray, second: np.ndarray, scheme: CategoryScheme) -> AgreementTable:
    k = len(scheme)
    counts = np.bincount(first * k + second, minlength=k * k).reshape(k, k)
    return AgreementTable.from_counts(counts, scheme)


def simulate_run(model: GuessingModel, n: int, seed: Seed) -> AgreementTable:
    """Simulate one rater seeing the same ``n``-long sequence twice.

    One truth sequence is drawn from ``p``; each position is a guess with
    probability ``gamma``, at the same positions in both rounds. Perceived
    positions report the truth; guesses are fresh draws from ``p`` in each
    round. The result depends only on (model, n, seed).
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    k = len(model.p)
    p = np.asarray(model.p)
    truth = rng.choice(k, size=n, p=p)
    guessed = rng.random(n) < model.gamma
    first = np.where(guessed, rng.choice(k, size=n, p=p), truth)
    second = np.where(guessed, rng.choice(k, size=n, p=p), truth)
    return _tabulate(first, second, model.scheme)


def simulate_pair(first: GuessingModel, second: GuessingModel, n: int, seed: Seed) -> AgreementTable:
    """Two observers, each with their own ``pi``, over one shared truth sequence.

    Each observer guesses at independently chosen positions. Rows hold the
    first observer's calls.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be at least 1, got {n}")
    if first.p != second.p:
        raise InvalidArgumentError("both observers must share the category distribution p")
    rng = np.random.default_rng(seed)
    k = len(first.p)
    p = np.asarray(first.p)
    truth = rng.choice(k, size=n, p=p)
    calls = []
    for model in (first, second):
        guessed = rng.random(n) < model.gamma
        calls.append(np.where(guessed, rng.choice(k, size=n, p=p), truth))
    return _tabulate(calls[0], calls[1], first.scheme)


def sweep_kappa(models: Sequence[GuessingModel], n: int, seed: int) -> List[Tuple[float, float]]:
    """Simulate each model on its own seed stream; return (pi, estimated kappa) pairs."""
    results = []
    for index, model in enumerate(models):
        table = simulate_run(model, n, model_stream(seed, index))
        estimate = cohen_kappa(table).kappa
        logging.debug(f"sweep model {index}: pi={model.pi} kappa_hat={estimate:.6f}")
        results.append((model.pi, estimate))
    return results


def metadata_line(seed: int, n: int) -> str:
    """Comment line identifying a simulation's random stream."""
    return f"# seed={seed}, generator={GENERATOR_ID}, n={n}"
