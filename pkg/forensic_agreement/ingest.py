"""Long-format evaluation records and the agreement tables built from them.

Repeatability pairs one examiner's two evaluations of a set; reproducibility
pairs two examiners' evaluations of the same set. Tables are always split by
material and ground truth.
"""
import csv
import io
import logging
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple, Union

import numpy as np
import pydantic
from pydantic import BaseModel, ConfigDict, Field, field_validator

from forensic_agreement.agreement import AgreementTable
from forensic_agreement.categories import CategoryScheme
from forensic_agreement.exceptions import (
    DataShapeError,
    DuplicateRecordError,
    InconsistentSetError,
    InvalidArgumentError,
    MalformedRowError,
    UnknownLabelError,
)
from forensic_agreement.types import GroupBy, Material, Stratum
from forensic_agreement.utils import validate_string_field

RECORD_COLUMNS = ("examiner_id", "set_id", "round", "material", "ground_truth", "conclusion")
POOLED_SUBJECT = "ALL"


class EvaluationRecord(BaseModel):
    """One examiner's conclusion on one set in one round."""

    model_config = ConfigDict(frozen=True)

    examiner_id: str
    set_id: str
    round: int = Field(ge=1, le=6)
    material: Material
    ground_truth: Stratum
    conclusion: str

    @field_validator("examiner_id", "set_id", "conclusion")
    @classmethod
    def _non_empty(cls, value: str, info: pydantic.ValidationInfo) -> str:
        validate_string_field(value, info.field_name)
        return value


@dataclass(frozen=True)
class PairedEvaluation:
    """Two conclusions on one set: first is the row, second the column."""

    first: str
    second: str
    stratum: Stratum
    material: Material
    subject: str
    set_id: str


class TableKey(NamedTuple):
    subject: str
    material: Material
    stratum: Stratum


def parse_records(lines: Iterable[str], scheme: CategoryScheme) -> List[EvaluationRecord]:
    """Parse and validate a records CSV.

    Raises:
        MalformedRowError: Bad header, wrong column count or invalid field
        UnknownLabelError: Conclusion outside the scheme
        DuplicateRecordError: Repeated (examiner_id, set_id, round)
        InconsistentSetError: Ground truth or material changing within a set
    """
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None or tuple(header) != RECORD_COLUMNS:
        raise MalformedRowError(f"header must be {','.join(RECORD_COLUMNS)}", line=1)

    records: List[EvaluationRecord] = []
    seen: Dict[Tuple[str, str, int], int] = {}
    set_properties: Dict[str, Tuple[Stratum, Material, int]] = {}
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(RECORD_COLUMNS):
            raise MalformedRowError(f"expected {len(RECORD_COLUMNS)} fields, found {len(row)}", line=line)
        try:
            record = EvaluationRecord.model_validate(dict(zip(RECORD_COLUMNS, row)))
        except pydantic.ValidationError as e:
            error = e.errors()[0]
            field = ".".join(str(part) for part in error["loc"])
            raise MalformedRowError(f"{field}: {error['msg']}", line=line) from None

        if record.conclusion not in scheme:
            raise UnknownLabelError(f"unknown conclusion {record.conclusion!r}", line=line)

        key = (record.examiner_id, record.set_id, record.round)
        if key in seen:
            raise DuplicateRecordError(
                f"examiner {key[0]} set {key[1]} round {key[2]} already given on line {seen[key]}",
                line=line,
            )
        seen[key] = line

        expected = set_properties.setdefault(record.set_id, (record.ground_truth, record.material, line))
        if expected[:2] != (record.ground_truth, record.material):
            raise InconsistentSetError(
                f"set {record.set_id} is {record.ground_truth.value}/{record.material.value} here "
                f"but {expected[0].value}/{expected[1].value} on line {expected[2]}",
                line=line,
            )
        records.append(record)

    logging.info(f"parsed {len(records)} evaluation records")
    return records


def repeatability_pairs(records: Iterable[EvaluationRecord]) -> List[PairedEvaluation]:
    """Pair each examiner's two evaluations of a set, earlier round first.

    Sets an examiner saw once are skipped.

    Raises:
        DataShapeError: If an examiner evaluated a set more than twice
    """
    grouped: Dict[Tuple[str, str], List[EvaluationRecord]] = defaultdict(list)
    for record in records:
        grouped[(record.examiner_id, record.set_id)].append(record)

    pairs = []
    for (examiner_id, set_id), evaluations in sorted(grouped.items()):
        if len(evaluations) == 1:
            continue
        if len(evaluations) > 2:
            raise DataShapeError(
                f"examiner {examiner_id} evaluated set {set_id} {len(evaluations)} times; at most 2 allowed"
            )
        earlier, later = sorted(evaluations, key=lambda r: r.round)
        pairs.append(PairedEvaluation(
            first=earlier.conclusion,
            second=later.conclusion,
            stratum=earlier.ground_truth,
            material=earlier.material,
            subject=examiner_id,
            set_id=set_id,
        ))
    return pairs


def reproducibility_pairs(records: Iterable[EvaluationRecord]) -> List[PairedEvaluation]:
    """One pair per set and unordered pair of distinct examiners.

    An examiner who saw a set twice contributes their earlier-round
    evaluation. The examiner with the smaller id supplies the row.
    """
    first_seen: Dict[str, Dict[str, EvaluationRecord]] = defaultdict(dict)
    for record in records:
        current = first_seen[record.set_id].get(record.examiner_id)
        if current is None or record.round < current.round:
            first_seen[record.set_id][record.examiner_id] = record

    pairs = []
    for set_id in sorted(first_seen):
        by_examiner = first_seen[set_id]
        for a, b in combinations(sorted(by_examiner), 2):
            row, col = by_examiner[a], by_examiner[b]
            pairs.append(PairedEvaluation(
                first=row.conclusion,
                second=col.conclusion,
                stratum=row.ground_truth,
                material=row.material,
                subject=f"{a}|{b}",
                set_id=set_id,
            ))
    return pairs


def build_tables(
    pairs: Iterable[PairedEvaluation],
    scheme: CategoryScheme,
    group_by: Union[GroupBy, str] = GroupBy.POOLED_OVER_SUBJECTS,
    exclude: Optional[Iterable[str]] = None,
) -> Dict[TableKey, AgreementTable]:
    """Accumulate pairs into count tables keyed by subject, material and stratum.

    Pairs touching an excluded label are dropped. Pooled tables use the
    subject ``ALL``. Keys with no remaining pairs are omitted.
    """
    group_by = GroupBy(group_by)
    excluded = frozenset(exclude or ())
    unknown = excluded - set(scheme.labels)
    if unknown:
        raise InvalidArgumentError(f"excluded labels not in scheme: {', '.join(sorted(unknown))}")

    k = len(scheme)
    counts: Dict[TableKey, np.ndarray] = {}
    dropped = 0
    for pair in pairs:
        if pair.first in excluded or pair.second in excluded:
            dropped += 1
            continue
        subject = pair.subject if group_by is GroupBy.PER_SUBJECT else POOLED_SUBJECT
        key = TableKey(subject, pair.material, pair.stratum)
        if key not in counts:
            counts[key] = np.zeros((k, k), dtype=np.int64)
        counts[key][scheme.index(pair.first), scheme.index(pair.second)] += 1

    if dropped:
        logging.info(f"excluded {dropped} pairs containing {sorted(excluded)}")
    return {key: AgreementTable.from_counts(counts[key], scheme) for key in sorted(counts)}


def synthesize_records(
    table: AgreementTable,
    material: Union[Material, str] = Material.BULLET,
    ground_truth: Union[Stratum, str] = Stratum.MATCHING,
    examiner_id: str = "E001",
) -> List[EvaluationRecord]:
    """Expand a count table into records: one set per counted pair, rounds 1 and 2."""
    material, ground_truth = Material(material), Stratum(ground_truth)
    records = []
    number = 0
    for i, first in enumerate(table.scheme.labels):
        for j, second in enumerate(table.scheme.labels):
            for _ in range(int(table.counts[i, j])):
                number += 1
                set_id = f"{material.value}-{ground_truth.value}-{number:06d}"
                for round_, conclusion in ((1, first), (2, second)):
                    records.append(EvaluationRecord(
                        examiner_id=examiner_id,
                        set_id=set_id,
                        round=round_,
                        material=material,
                        ground_truth=ground_truth,
                        conclusion=conclusion,
                    ))
    return records


def format_records_csv(records: Iterable[EvaluationRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(RECORD_COLUMNS)
    for r in records:
        writer.writerow([r.examiner_id, r.set_id, r.round, r.material.value, r.ground_truth.value, r.conclusion])
    return buffer.getvalue()
