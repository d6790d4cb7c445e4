"""Dataset-level commands: ``analyze``, ``signtest`` and ``plot``."""
import csv
import logging
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

from forensic_agreement.agreement import AgreementSummary, summarize
from forensic_agreement.base import BaseCommand, register_command
from forensic_agreement.categories import SCORING_SCHEMES, apply_pooling, builtin_pooling, full_afte_scheme
from forensic_agreement.exceptions import NoInformationError, ValidationError
from forensic_agreement.inference import SignTestResult, sign_test
from forensic_agreement.ingest import (
    POOLED_SUBJECT,
    build_tables,
    parse_records,
    repeatability_pairs,
    reproducibility_pairs,
)
from forensic_agreement.report import (
    ScatterPoint,
    ScatterSpec,
    SummaryKey,
    format_isoline_tally,
    isoline_tally,
    render_summary,
    scatter_plot,
)
from forensic_agreement.types import GroupBy, SummaryFormat
from forensic_agreement.utils import format_number

PAIRINGS = (
    ("repeatability", repeatability_pairs),
    ("reproducibility", reproducibility_pairs),
)

Group = Tuple[str, str, str]


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logging.info(f"wrote {path}")


def format_sign_test(result: SignTestResult) -> str:
    return (
        "sign test (one-sided: observed agreement exceeds expected)\n"
        f"  positive:  {result.n_positive}\n"
        f"  negative:  {result.n_negative}\n"
        f"  zero:      {result.n_zero} (dropped)\n"
        f"  effective: {result.n_effective}\n"
        f"  p-value:   {result.p_value:.6g}\n"
        f"{result.machine_line()}\n"
    )


def read_floats_csv(path: Path, columns: int) -> List[List[str]]:
    """Rows of a small CSV, skipping a non-numeric header row if present."""
    with open(path, encoding="utf-8", newline="") as handle:
        rows = [row for row in csv.reader(handle) if row]
    if rows:
        try:
            float(rows[0][-1])
        except ValueError:
            rows = rows[1:]
    for number, row in enumerate(rows, start=1):
        if len(row) != columns:
            raise ValidationError(f"{path}: row {number} has {len(row)} fields, expected {columns}")
    return rows


@register_command
class AnalyzeCommand(BaseCommand):
    """Repeatability and reproducibility analysis of a records file."""

    name = "analyze"

    def _validate_config(self) -> None:
        self._require("records", "out")

    def _analyses(self, pairs) -> Dict[SummaryKey, AgreementSummary]:
        scheme = full_afte_scheme()
        analyses: Dict[SummaryKey, AgreementSummary] = {}
        for scoring in SCORING_SCHEMES:
            pooling = None if scoring == "none" else builtin_pooling(scoring)
            for group_by in (GroupBy.POOLED_OVER_SUBJECTS, GroupBy.PER_SUBJECT):
                tables = build_tables(pairs, scheme, group_by, self.config.exclude)
                for key, table in tables.items():
                    if pooling is not None:
                        table = apply_pooling(table, pooling)
                    summary_key = SummaryKey(key.subject, key.material.value, key.stratum.value, scoring)
                    analyses[summary_key] = summarize(table)
        return analyses

    def _group_subjects(
        self, analyses: Dict[SummaryKey, AgreementSummary]
    ) -> Dict[Group, List[Tuple[str, AgreementSummary]]]:
        groups: Dict[Group, List[Tuple[str, AgreementSummary]]] = {}
        for key, summary in analyses.items():
            if key.subject != POOLED_SUBJECT:
                groups.setdefault((key.material, key.stratum, key.scheme), []).append((key.subject, summary))
        return groups

    def _sign_tests(self, groups: Dict[Group, List[Tuple[str, AgreementSummary]]]) -> str:
        lines = []
        for (material, stratum, scoring), members in groups.items():
            label = f"{material} {stratum} {scoring}"
            try:
                result = sign_test([s.p_observed - s.p_expected for _, s in members])
            except NoInformationError as e:
                lines.append(f"{label}: {e}")
                continue
            lines.append(f"{label}: {result.machine_line()}")
        return "\n".join(lines) + "\n"

    def _isoline_counts(self, groups: Dict[Group, List[Tuple[str, AgreementSummary]]]) -> str:
        blocks = []
        for (material, stratum, scoring), members in groups.items():
            tally = isoline_tally([s for _, s in members], self.config.isolines)
            blocks.append(format_isoline_tally(f"{material} {stratum} {scoring}", tally, self.config.decimals))
        return "\n".join(blocks)

    def _plots(self, kind: str, groups: Dict[Group, List[Tuple[str, AgreementSummary]]]) -> List[Path]:
        written = []
        for (material, stratum, scoring), members in groups.items():
            spec = ScatterSpec(
                points=tuple(ScatterPoint(s.p_expected, s.p_observed, subject) for subject, s in members),
                isolines=self.config.isolines,
                title=f"{kind.capitalize()}: {material}, {stratum}, scoring {scoring}",
            )
            path = Path(f"{self.config.out}.{kind}.{material}.{stratum}.{scoring}.svg")
            _write(path, scatter_plot(spec))
            written.append(path)
        return written

    def _run(self) -> str:
        scheme = full_afte_scheme()
        with open(self.config.records, encoding="utf-8", newline="") as handle:
            records = parse_records(handle, scheme)

        report: List[str] = []
        for kind, pairing in PAIRINGS:
            pairs = pairing(records)
            if not pairs:
                logging.warning(f"no {kind} pairs in {self.config.records}")
                report.append(f"{kind}: no pairs\n")
                continue
            analyses = self._analyses(pairs)
            stem = f"{self.config.out}.{kind}"
            text = render_summary(analyses, SummaryFormat.TEXT, self.config.decimals, self.config.kappa_decimals)
            _write(Path(f"{stem}.summary.txt"), text)
            _write(Path(f"{stem}.summary.csv"), render_summary(analyses, SummaryFormat.CSV))
            groups = self._group_subjects(analyses)
            _write(Path(f"{stem}.signtest.txt"), self._sign_tests(groups))
            _write(Path(f"{stem}.isolines.txt"), self._isoline_counts(groups))
            plots = self._plots(kind, groups)
            report.append(f"{kind}: {len(pairs)} pairs, {len(analyses)} tables, {len(plots)} plots\n{text}")
        return "\n".join(report)


@register_command
class SignTestCommand(BaseCommand):
    """Sign test over per-examiner (observed, expected) pairs."""

    name = "signtest"

    def _validate_config(self) -> None:
        self._require("input")

    def _run(self) -> str:
        rows = read_floats_csv(self.config.input, 2)
        try:
            differences = [float(observed) - float(expected) for observed, expected in rows]
        except ValueError:
            raise ValidationError(f"{self.config.input}: non-numeric agreement value") from None
        return format_sign_test(sign_test(differences))


@register_command
class PlotCommand(BaseCommand):
    """Scatter plot of per-examiner (P_e, P_o) points."""

    name = "plot"

    def _validate_config(self) -> None:
        self._require("points", "out")

    def _run(self) -> str:
        rows = read_floats_csv(self.config.points, 3)
        try:
            points: Sequence[ScatterPoint] = [
                ScatterPoint(float(expected), float(observed), subject) for subject, expected, observed in rows
            ]
        except ValueError:
            raise ValidationError(f"{self.config.points}: non-numeric agreement value") from None
        spec = ScatterSpec(points=tuple(points), isolines=self.config.isolines, title=self.config.title)
        path = Path(f"{self.config.out}.svg")
        _write(path, scatter_plot(spec))
        return f"wrote {path} ({len(points)} points, isolines {', '.join(format_number(k, 2) for k in spec.isolines)})\n"
