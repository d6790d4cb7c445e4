"""Guessing-model commands: ``model`` and ``simulate``."""
import pydantic

from forensic_agreement.agreement import cohen_kappa, format_proportion_csv, format_table_csv
from forensic_agreement.base import BaseCommand, register_command
from forensic_agreement.exceptions import InvalidArgumentError
from forensic_agreement.guessing import (
    GuessingModel,
    metadata_line,
    model_kappa,
    model_table,
    simulate_run,
)
from forensic_agreement.utils import format_number


class _ModelCommand(BaseCommand):
    """Shared model construction for the guessing commands."""

    def _validate_config(self) -> None:
        self._require("pi", "p")

    def _model(self) -> GuessingModel:
        try:
            return GuessingModel(pi=self.config.pi, p=self.config.p, labels=self.config.labels)
        except pydantic.ValidationError as e:
            error = e.errors()[0]
            raise InvalidArgumentError(f"invalid guessing model: {error['msg']}") from None


@register_command
class ModelCommand(_ModelCommand):
    """Closed-form agreement table and kappa of a guessing model."""

    name = "model"

    def _run(self) -> str:
        model = self._model()
        kappa = model_kappa(model)
        kappa_text = "degenerate" if kappa is None else format_number(kappa, self.config.kappa_decimals)
        return format_proportion_csv(model_table(model)) + f"kappa,{kappa_text}\n"


@register_command
class SimulateCommand(_ModelCommand):
    """Seeded simulation of one rater under the guessing model."""

    name = "simulate"

    def _validate_config(self) -> None:
        self._require("pi", "p", "n")

    def _run(self) -> str:
        model = self._model()
        table = simulate_run(model, self.config.n, self.config.seed)
        summary = cohen_kappa(table)
        kappa_text = (
            "degenerate" if summary.degenerate
            else format_number(summary.kappa, self.config.kappa_decimals)
        )
        return (
            f"{metadata_line(self.config.seed, self.config.n)}\n"
            f"{format_table_csv(table)}"
            f"kappa_hat,{kappa_text}\n"
        )
