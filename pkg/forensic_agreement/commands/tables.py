"""Table-level commands: ``stats`` and ``pool``."""
from pathlib import Path
from typing import List, Optional, Sequence

from forensic_agreement.agreement import (
    AgreementTable,
    drop_labels,
    format_table_csv,
    read_table_csv,
    summarize,
    zero_labels,
)
from forensic_agreement.base import BaseCommand, register_command
from forensic_agreement.categories import (
    SCORING_SCHEMES,
    CategoryScheme,
    PoolingScheme,
    apply_pooling,
    builtin_pooling,
    full_afte_scheme,
    parse_pooling,
)
from forensic_agreement.exceptions import ConfigurationError
from forensic_agreement.inference import interpret_kappa
from forensic_agreement.ingest import POOLED_SUBJECT
from forensic_agreement.report import SummaryKey, render_summary
from forensic_agreement.types import RunConfig, SummaryFormat
from forensic_agreement.utils import format_number, format_percent


def load_table(config: RunConfig) -> AgreementTable:
    """Read ``--table``, enforcing the AFTE scheme when ``--scheme afte`` is set."""
    scheme: Optional[CategoryScheme] = full_afte_scheme() if config.scheme == "afte" else None
    with open(config.table, encoding="utf-8", newline="") as handle:
        return read_table_csv(handle, scheme)


def resolve_pooling(name: str, source: CategoryScheme) -> Optional[PoolingScheme]:
    """Pooling for a ``--pooling`` value: none, a builtin name or a mapping file."""
    if name == "none":
        return None
    if name in SCORING_SCHEMES:
        return builtin_pooling(name)
    with open(Path(name), encoding="utf-8") as handle:
        return parse_pooling(handle, source)


def exclude_and_pool(
    table: AgreementTable, exclude: Sequence[str], pooling: Optional[PoolingScheme]
) -> AgreementTable:
    """Drop pairs touching excluded labels, then pool.

    Exclusion happens on the source scheme so the pooling still applies.
    Pooled labels left with no source label are removed afterwards.
    """
    if pooling is None:
        return drop_labels(table, exclude) if exclude else table
    excluded = set(exclude)
    pooled = apply_pooling(zero_labels(table, excluded) if excluded else table, pooling)
    emptied = [label for label in pooling.target.labels if set(pooling.preimage(label)) <= excluded]
    return drop_labels(pooled, emptied) if emptied else pooled


@register_command
class StatsCommand(BaseCommand):
    """Observed agreement, expected agreement and kappa for one table."""

    name = "stats"

    def _validate_config(self) -> None:
        self._require("table")

    def _run(self) -> str:
        table = load_table(self.config)
        pooling = resolve_pooling(self.config.pooling, table.scheme)
        summary = summarize(exclude_and_pool(table, self.config.exclude, pooling))

        if self.config.format is not SummaryFormat.TEXT:
            key = SummaryKey(POOLED_SUBJECT, "", "", self.config.pooling)
            return render_summary(
                {key: summary}, self.config.format, self.config.decimals, self.config.kappa_decimals
            )

        decimals = self.config.decimals
        lines: List[str] = [
            f"n: {summary.n}",
            f"P_o: {format_percent(summary.p_observed, decimals)}",
            f"P_e: {format_percent(summary.p_expected, decimals)}",
            f"disagreement: {format_percent(summary.p_disagreement, decimals)}",
        ]
        if summary.degenerate:
            lines.append("kappa: n/a (degenerate)")
        else:
            lines.append(f"kappa: {format_number(summary.kappa, self.config.kappa_decimals)}")
            lines.append(f"band: {interpret_kappa(summary.kappa).label.value}")
        labels = summary.scheme.labels
        for name, values in (("rows", summary.row_marginals), ("cols", summary.col_marginals)):
            cells = ", ".join(f"{label}={format_percent(v, decimals)}" for label, v in zip(labels, values))
            lines.append(f"marginals ({name}): {cells}")
        return "\n".join(lines) + "\n"


@register_command
class PoolCommand(BaseCommand):
    """Collapse a table's categories with a pooling scheme."""

    name = "pool"

    def _validate_config(self) -> None:
        self._require("table")
        if self.config.pooling == "none":
            raise ConfigurationError("pool requires --pooling")

    def _run(self) -> str:
        table = load_table(self.config)
        pooling = resolve_pooling(self.config.pooling, table.scheme)
        return format_table_csv(apply_pooling(table, pooling))
