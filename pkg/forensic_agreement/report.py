"""Observed-versus-expected scatter plots and agreement summary documents.

Plot geometry: the unit square maps onto a 600x600 viewport with 60-unit
margins, so P_e = x becomes 60 + 480x and P_o = y becomes 540 - 480y.
The top margin holds the box plot of expected agreement, the right margin
the box plot of observed agreement.
"""
import csv
import io
import json
import math
from dataclasses import dataclass, field
from statistics import fmean
from typing import Dict, List, Mapping, NamedTuple, Sequence, Tuple, Union

from forensic_agreement.agreement import AgreementSummary
from forensic_agreement.exceptions import EmptyInputError, InvalidArgumentError
from forensic_agreement.inference import (
    BAND_CONVENTION,
    BoxStats,
    box_stats,
    interpret_kappa,
    kappa_isoline,
)
from forensic_agreement.ingest import POOLED_SUBJECT
from forensic_agreement.svg import SvgDocument
from forensic_agreement.types import SummaryFormat
from forensic_agreement.utils import format_number, format_percent

VIEWPORT = 600
MARGIN = 60
PLOT = VIEWPORT - 2 * MARGIN
DEFAULT_ISOLINES = (0.0, 0.8)

SUMMARY_COLUMNS = ("subject", "stratum", "material", "scheme", "n", "p_observed", "p_expected", "kappa", "band")
AVERAGE_SUBJECT = "AVERAGE"
DEGENERATE_BAND = "n/a (degenerate)"

STYLE = (
    ".frame{fill:none;stroke:#000;stroke-width:1}"
    ".grid{stroke:#ddd;stroke-width:0.5}"
    ".isoline{stroke:#444;stroke-width:1;stroke-dasharray:6 3}"
    ".point{fill:#1f5fa8;fill-opacity:0.7;stroke:none}"
    ".box{fill:#eef;stroke:#000;stroke-width:1}"
    ".median{stroke:#000;stroke-width:2.5}"
    ".whisker{stroke:#000;stroke-width:1}"
    ".outlier{fill:none;stroke:#000;stroke-width:1}"
    "text{font-family:sans-serif;font-size:11px}"
)


def x_px(p_expected: float) -> float:
    return MARGIN + PLOT * p_expected


def y_px(p_observed: float) -> float:
    return MARGIN + PLOT * (1.0 - p_observed)


@dataclass(frozen=True)
class ScatterPoint:
    p_expected: float
    p_observed: float
    label: str = ""


@dataclass(frozen=True)
class ScatterSpec:
    """Points in the (P_e, P_o) unit square plus the kappa isolines to draw."""

    points: Tuple[ScatterPoint, ...]
    isolines: Tuple[float, ...] = DEFAULT_ISOLINES
    title: str = ""
    box_panels: bool = field(default=True)

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "isolines", tuple(self.isolines))
        for point in self.points:
            if not (0.0 <= point.p_expected <= 1.0 and 0.0 <= point.p_observed <= 1.0):
                raise InvalidArgumentError(
                    f"point {point.label!r} ({point.p_expected}, {point.p_observed}) lies outside the unit square"
                )
        for kappa in self.isolines:
            if not 0.0 <= kappa <= 1.0:
                raise InvalidArgumentError(f"isoline kappa {kappa} outside [0, 1]")


def _horizontal_box(svg: SvgDocument, stats: BoxStats, center: float, half: float) -> None:
    top, bottom = center - half, center + half
    svg.line(x_px(stats.whisker_low), center, x_px(stats.q1), center, "whisker")
    svg.line(x_px(stats.q3), center, x_px(stats.whisker_high), center, "whisker")
    for end in (stats.whisker_low, stats.whisker_high):
        svg.line(x_px(end), top + half / 2, x_px(end), bottom - half / 2, "whisker")
    svg.rect(x_px(stats.q1), top, x_px(stats.q3) - x_px(stats.q1), 2 * half, "box")
    svg.line(x_px(stats.median), top, x_px(stats.median), bottom, "median")
    for value in stats.outliers:
        svg.circle(x_px(value), center, 2.5, "outlier")


def _vertical_box(svg: SvgDocument, stats: BoxStats, center: float, half: float) -> None:
    left, right = center - half, center + half
    svg.line(center, y_px(stats.whisker_low), center, y_px(stats.q1), "whisker")
    svg.line(center, y_px(stats.q3), center, y_px(stats.whisker_high), "whisker")
    for end in (stats.whisker_low, stats.whisker_high):
        svg.line(left + half / 2, y_px(end), right - half / 2, y_px(end), "whisker")
    svg.rect(left, y_px(stats.q3), 2 * half, y_px(stats.q1) - y_px(stats.q3), "box")
    svg.line(left, y_px(stats.median), right, y_px(stats.median), "median")
    for value in stats.outliers:
        svg.circle(center, y_px(value), 2.5, "outlier")


def scatter_plot(spec: ScatterSpec) -> str:
    """Render the observed-vs-expected scatter as a standalone SVG document."""
    svg = SvgDocument(VIEWPORT, VIEWPORT, title=spec.title or "Observed versus expected agreement")

    svg.group_start("axes")
    for step in range(11):
        tick = step / 10
        svg.line(x_px(tick), y_px(0.0), x_px(tick), y_px(1.0), "grid")
        svg.line(x_px(0.0), y_px(tick), x_px(1.0), y_px(tick), "grid")
        if step % 2 == 0:
            svg.text(x_px(tick), y_px(0.0) + 16, f"{tick:.1f}", "tick")
            svg.text(x_px(0.0) - 6, y_px(tick) + 4, f"{tick:.1f}", "tick", anchor="end")
    svg.rect(x_px(0.0), y_px(1.0), PLOT, PLOT, "frame")
    svg.text(VIEWPORT / 2, VIEWPORT - 14, "Expected agreement", "axis-label")
    svg.text(16, VIEWPORT / 2, "Observed agreement", "axis-label",
             transform=f"rotate(-90 16 {VIEWPORT / 2:.0f})")
    if spec.title:
        svg.text(VIEWPORT / 2, 12, spec.title, "title")
    svg.group_end()

    svg.group_start("isolines")
    for kappa in spec.isolines:
        start, end = kappa_isoline(kappa, 0.0), kappa_isoline(kappa, 1.0)
        svg.line(x_px(0.0), y_px(start), x_px(1.0), y_px(end), "isoline", **{"data-kappa": repr(kappa)})
        svg.text(x_px(0.0) + 4, y_px(start) - 4, f"κ = {kappa:g}", "isoline-label", anchor="start")
    svg.group_end()

    svg.group_start("points")
    for point in spec.points:
        svg.circle(x_px(point.p_expected), y_px(point.p_observed), 4.0, "point", title=point.label)
    svg.group_end()

    if spec.box_panels and spec.points:
        svg.group_start("box-expected")
        _horizontal_box(svg, box_stats([p.p_expected for p in spec.points]), MARGIN / 2 + 6, 10)
        svg.group_end()
        svg.group_start("box-observed")
        _vertical_box(svg, box_stats([p.p_observed for p in spec.points]), VIEWPORT - MARGIN / 2, 10)
        svg.group_end()

    return svg.render(STYLE)


class SummaryKey(NamedTuple):
    subject: str
    material: str
    stratum: str
    scheme: str


def _band(kappa: float) -> str:
    if math.isnan(kappa):
        return DEGENERATE_BAND
    return interpret_kappa(kappa).label.value


def _summary_rows(analyses: Mapping[SummaryKey, AgreementSummary]) -> List[Dict[str, object]]:
    groups: Dict[Tuple[str, str, str], List[Tuple[SummaryKey, AgreementSummary]]] = {}
    for key, summary in analyses.items():
        groups.setdefault((key.material, key.stratum, key.scheme), []).append((key, summary))

    rows: List[Dict[str, object]] = []
    for (material, stratum, scheme), members in groups.items():
        for key, summary in members:
            rows.append({
                "subject": key.subject, "stratum": stratum, "material": material, "scheme": scheme,
                "n": summary.n, "p_observed": summary.p_observed, "p_expected": summary.p_expected,
                "kappa": summary.kappa, "band": _band(summary.kappa),
            })
        subjects = [summary for key, summary in members if key.subject != POOLED_SUBJECT]
        if not subjects:
            continue
        kappas = [s.kappa for s in subjects if not s.degenerate]
        mean_kappa = fmean(kappas) if kappas else math.nan
        rows.append({
            "subject": AVERAGE_SUBJECT, "stratum": stratum, "material": material, "scheme": scheme,
            "n": sum(s.n or 0 for s in subjects),
            "p_observed": fmean(s.p_observed for s in subjects),
            "p_expected": fmean(s.p_expected for s in subjects),
            "kappa": mean_kappa, "band": _band(mean_kappa),
        })
    return rows


def _text_table(headers: Sequence[str], body: Sequence[Sequence[str]]) -> str:
    widths = [max([len(h), *(len(row[i]) for row in body)]) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render_summary(
    analyses: Mapping[SummaryKey, AgreementSummary],
    format: Union[SummaryFormat, str] = SummaryFormat.TEXT,
    decimals: int = 1,
    kappa_decimals: int = 4,
) -> str:
    """One row per (subject, stratum, scheme) plus an unweighted AVERAGE row per group.

    Raises:
        EmptyInputError: If ``analyses`` is empty
    """
    if not analyses:
        raise EmptyInputError("no analyses to summarize")
    format = SummaryFormat(format)
    rows = _summary_rows(analyses)

    if format is SummaryFormat.JSON:
        payload = [
            {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in row.items()}
            for row in rows
        ]
        return json.dumps(
            {"band_convention": BAND_CONVENTION, "rows": payload},
            indent=2, sort_keys=True, ensure_ascii=False,
        ) + "\n"

    if format is SummaryFormat.CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for row in rows:
            writer.writerow([
                row["subject"], row["stratum"], row["material"], row["scheme"],
                "" if row["n"] is None else row["n"],
                format_number(row["p_observed"], 6), format_number(row["p_expected"], 6),
                format_number(row["kappa"], 6), row["band"],
            ])
        return buffer.getvalue()

    body = [
        [
            str(row["subject"]), str(row["stratum"]), str(row["material"]), str(row["scheme"]),
            "" if row["n"] is None else str(row["n"]),
            format_percent(row["p_observed"], decimals), format_percent(row["p_expected"], decimals),
            format_number(row["kappa"], kappa_decimals), str(row["band"]),
        ]
        for row in rows
    ]
    return _text_table(SUMMARY_COLUMNS, body) + f"# {BAND_CONVENTION}\n"


OBSERVED_BAR = 0.9


@dataclass(frozen=True)
class IsolineTally:
    """Where a group of subjects falls relative to the kappa isolines.

    Kappa counts cover non-degenerate subjects only; the chance and
    observed-agreement counts cover every subject.
    """

    subjects: int
    degenerate: int
    at_or_above: Tuple[Tuple[float, int], ...]
    below_chance: int
    observed_bar: float
    at_or_above_bar: int


def isoline_tally(
    summaries: Sequence[AgreementSummary],
    isolines: Sequence[float] = DEFAULT_ISOLINES,
    observed_bar: float = OBSERVED_BAR,
) -> IsolineTally:
    """Count subjects with kappa on or above each isoline and with P_o below P_e.

    Raises:
        EmptyInputError: If there are no summaries
        InvalidArgumentError: If an isoline or the observed bar lies outside [0, 1]
    """
    if not summaries:
        raise EmptyInputError("no subjects to tally")
    for value in (*isolines, observed_bar):
        if not 0.0 <= value <= 1.0:
            raise InvalidArgumentError(f"threshold {value} outside [0, 1]")
    kappas = [s.kappa for s in summaries if not s.degenerate]
    return IsolineTally(
        subjects=len(summaries),
        degenerate=len(summaries) - len(kappas),
        at_or_above=tuple((level, sum(1 for k in kappas if k >= level)) for level in sorted(set(isolines))),
        below_chance=sum(1 for s in summaries if s.p_observed < s.p_expected),
        observed_bar=observed_bar,
        at_or_above_bar=sum(1 for s in summaries if s.p_observed >= observed_bar),
    )


def _share(count: int, total: int, decimals: int) -> str:
    if total == 0:
        return str(count)
    return f"{count} ({format_percent(count / total, decimals)})"


def format_isoline_tally(label: str, tally: IsolineTally, decimals: int = 1) -> str:
    defined = tally.subjects - tally.degenerate
    lines = [f"{label} ({tally.subjects} subjects, {tally.degenerate} degenerate)"]
    for level, count in tally.at_or_above:
        lines.append(f"  kappa >= {format_number(level, 2)}: {_share(count, defined, decimals)}")
    lines.append(f"  P_o < P_e: {_share(tally.below_chance, tally.subjects, decimals)}")
    lines.append(
        f"  P_o >= {format_percent(tally.observed_bar, decimals)}: "
        f"{_share(tally.at_or_above_bar, tally.subjects, decimals)}"
    )
    return "\n".join(lines) + "\n"
