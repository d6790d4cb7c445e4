"""Agreement-table mathematics: observed and expected agreement, marginals, Cohen's kappa.

Tables keep raw integer counts as their source of truth; proportions are
derived on demand. Every function accepting a table also accepts a
:class:`ProportionTable`, so closed-form model tables go through the same code.
"""
import csv
import io
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from forensic_agreement.categories import CategoryScheme
from forensic_agreement.exceptions import (
    DimensionMismatchError,
    InvalidArgumentError,
    NegativeCountError,
    NonSquareError,
    SchemeMismatchError,
    ValidationError,
    ZeroTotalError,
)
from forensic_agreement.types import Axis

DEGENERACY_TOLERANCE = 1e-12
SUM_TOLERANCE = 1e-12


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _check_square(matrix: np.ndarray, scheme: CategoryScheme) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NonSquareError(f"matrix must be square, got shape {matrix.shape}")
    if matrix.shape[0] != len(scheme):
        raise DimensionMismatchError(
            f"matrix is {matrix.shape[0]}x{matrix.shape[0]} but the scheme has {len(scheme)} labels"
        )


@dataclass(frozen=True, eq=False)
class AgreementTable:
    """Square count matrix; rows are the first evaluation, columns the second."""

    scheme: CategoryScheme
    counts: np.ndarray

    @classmethod
    def from_counts(cls, matrix: Sequence[Sequence[int]], scheme: CategoryScheme) -> "AgreementTable":
        """Validate a count matrix against a scheme.

        Raises:
            NonSquareError: If the matrix is not square
            DimensionMismatchError: If its size differs from the scheme's
            NegativeCountError: If any count is negative
            ZeroTotalError: If all counts are zero
        """
        raw = np.asarray(matrix)
        _check_square(raw, scheme)
        if raw.dtype.kind not in "iu":
            if raw.dtype.kind not in "fb" or not np.all(np.isfinite(raw)) or np.any(raw != np.round(raw)):
                raise ValidationError("counts must be integers")
        counts = np.array(raw, dtype=np.int64)
        if (counts < 0).any():
            raise NegativeCountError("counts must be non-negative")
        if counts.sum() == 0:
            raise ZeroTotalError("table total must be at least 1")
        return cls(scheme=scheme, counts=_frozen(counts))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def proportions(self) -> np.ndarray:
        return _frozen(self.counts / self.total)

    def transpose(self) -> "AgreementTable":
        return AgreementTable(scheme=self.scheme, counts=_frozen(self.counts.T.copy()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AgreementTable):
            return NotImplemented
        return self.scheme == other.scheme and np.array_equal(self.counts, other.counts)

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class ProportionTable:
    """Square matrix of cell proportions summing to one."""

    scheme: CategoryScheme
    props: np.ndarray

    def __post_init__(self) -> None:
        props = np.array(self.props, dtype=np.float64)
        _check_square(props, self.scheme)
        if (props < 0).any() or (props > 1 + SUM_TOLERANCE).any():
            raise ValidationError("proportions must lie in [0, 1]")
        if abs(props.sum() - 1.0) > SUM_TOLERANCE:
            raise ValidationError(f"proportions sum to {props.sum()!r}, not 1")
        object.__setattr__(self, "props", _frozen(props))

    @property
    def proportions(self) -> np.ndarray:
        return self.props

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProportionTable):
            return NotImplemented
        return self.scheme == other.scheme and np.array_equal(self.props, other.props)

    __hash__ = None  # type: ignore[assignment]


Table = Union[AgreementTable, ProportionTable]


@dataclass(frozen=True)
class AgreementSummary:
    """Observed agreement, expected agreement and kappa for one table.

    ``kappa`` is NaN when ``degenerate`` is set (expected agreement of 1).
    ``n`` is None for tables given as proportions.
    """

    scheme: CategoryScheme
    p_observed: float
    p_expected: float
    kappa: float
    degenerate: bool
    row_marginals: Tuple[float, ...]
    col_marginals: Tuple[float, ...]
    n: Optional[int] = None

    @property
    def p_disagreement(self) -> float:
        return 1.0 - self.p_observed


def from_counts(matrix: Sequence[Sequence[int]], scheme: CategoryScheme) -> AgreementTable:
    return AgreementTable.from_counts(matrix, scheme)


def observed_agreement(table: Table) -> float:
    """Share of paired evaluations on the diagonal."""
    if isinstance(table, AgreementTable):
        return int(np.trace(table.counts)) / table.total
    return float(np.trace(table.props))


def marginals(table: Table, axis: Union[Axis, str] = Axis.ROWS) -> np.ndarray:
    """Row (first evaluation) or column (second evaluation) proportions."""
    axis = Axis(axis)
    summed = 1 if axis is Axis.ROWS else 0
    if isinstance(table, AgreementTable):
        return _frozen(table.counts.sum(axis=summed) / table.total)
    return _frozen(table.props.sum(axis=summed))


def proportion_table(table: AgreementTable) -> ProportionTable:
    return ProportionTable(scheme=table.scheme, props=table.counts / table.total)


def expected_table(table: Table) -> ProportionTable:
    """Independence table: cell (i, j) is row marginal i times column marginal j."""
    return ProportionTable(
        scheme=table.scheme,
        props=np.outer(marginals(table, Axis.ROWS), marginals(table, Axis.COLS)),
    )


def expected_agreement(table: Table) -> float:
    """Sum over categories of the product of corresponding marginals."""
    if isinstance(table, AgreementTable):
        rows = table.counts.sum(axis=1).tolist()
        cols = table.counts.sum(axis=0).tolist()
        return sum(r * c for r, c in zip(rows, cols)) / table.total ** 2
    return float(np.dot(marginals(table, Axis.ROWS), marginals(table, Axis.COLS)))


def kappa_from_agreement(p_observed: float, p_expected: float) -> float:
    """Cohen's kappa from its two ingredients; NaN when 1 - P_e vanishes."""
    if 1.0 - p_expected < DEGENERACY_TOLERANCE:
        return math.nan
    return (p_observed - p_expected) / (1.0 - p_expected)


def cohen_kappa(table: Table) -> AgreementSummary:
    """Compute kappa = (P_o - P_e) / (1 - P_e) together with its inputs.

    A table whose mass sits in one diagonal cell has P_e = 1; it is returned
    with ``degenerate`` set instead of raising.
    """
    p_observed = observed_agreement(table)
    p_expected = expected_agreement(table)
    kappa = kappa_from_agreement(p_observed, p_expected)
    degenerate = math.isnan(kappa)
    if degenerate:
        logging.debug(f"degenerate kappa for table over {list(table.scheme.labels)}")
    return AgreementSummary(
        scheme=table.scheme,
        p_observed=p_observed,
        p_expected=p_expected,
        kappa=kappa,
        degenerate=degenerate,
        row_marginals=tuple(marginals(table, Axis.ROWS).tolist()),
        col_marginals=tuple(marginals(table, Axis.COLS).tolist()),
        n=table.total if isinstance(table, AgreementTable) else None,
    )


def summarize(table: AgreementTable) -> AgreementSummary:
    """Summary of a count table, with its total as ``n``."""
    if not isinstance(table, AgreementTable):
        raise InvalidArgumentError("summarize needs a count table")
    summary = cohen_kappa(table)
    logging.debug(
        f"summary n={summary.n} P_o={summary.p_observed:.6f} "
        f"P_e={summary.p_expected:.6f} kappa={summary.kappa:.6f}"
    )
    return summary


def exact_agreement(table: AgreementTable) -> Tuple[Fraction, Fraction, Optional[Fraction]]:
    """P_o, P_e and kappa as exact fractions; kappa is None when degenerate."""
    total = table.total
    p_observed = Fraction(int(np.trace(table.counts)), total)
    rows = table.counts.sum(axis=1).tolist()
    cols = table.counts.sum(axis=0).tolist()
    p_expected = Fraction(sum(r * c for r, c in zip(rows, cols)), total * total)
    if p_expected == 1:
        return p_observed, p_expected, None
    return p_observed, p_expected, (p_observed - p_expected) / (1 - p_expected)


def _known_labels(scheme: CategoryScheme, labels: Iterable[str]) -> Set[str]:
    excluded = set(labels)
    unknown = excluded - set(scheme.labels)
    if unknown:
        raise InvalidArgumentError(f"cannot exclude unknown labels: {', '.join(sorted(unknown))}")
    return excluded


def zero_labels(table: AgreementTable, labels: Iterable[str]) -> AgreementTable:
    """Remove every pair that touches the given categories, keeping the scheme."""
    excluded = _known_labels(table.scheme, labels)
    counts = table.counts.copy()
    for label in excluded:
        index = table.scheme.index(label)
        counts[index, :] = 0
        counts[:, index] = 0
    return AgreementTable.from_counts(counts, table.scheme)


def drop_labels(table: AgreementTable, labels: Iterable[str]) -> AgreementTable:
    """Remove categories together with every pair that touches them."""
    excluded = _known_labels(table.scheme, labels)
    keep = [i for i, label in enumerate(table.scheme.labels) if label not in excluded]
    scheme = CategoryScheme(tuple(table.scheme.labels[i] for i in keep))
    return AgreementTable.from_counts(table.counts[np.ix_(keep, keep)], scheme)


def read_table_csv(lines: Iterable[str], scheme: Optional[CategoryScheme] = None) -> AgreementTable:
    """Read a count table: header ``,label,...`` then ``label,count,...`` rows.

    The scheme is taken from the header unless one is given, in which case the
    header must match it exactly.
    """
    rows: List[List[str]] = [row for row in csv.reader(lines) if row]
    if not rows:
        raise ValidationError("table CSV is empty")
    header = rows[0]
    if header[0] != "":
        raise ValidationError("table CSV header must start with an empty cell")
    labels = tuple(header[1:])
    if scheme is None:
        scheme = CategoryScheme(labels)
    elif labels != scheme.labels:
        raise SchemeMismatchError(f"table header {list(labels)} does not match scheme {list(scheme.labels)}")
    body = rows[1:]
    if len(body) != len(scheme):
        raise DimensionMismatchError(f"expected {len(scheme)} table rows, found {len(body)}")
    matrix = []
    for label, row in zip(scheme.labels, body):
        if row[0] != label:
            raise SchemeMismatchError(f"row label {row[0]!r} where {label!r} was expected")
        if len(row) != len(scheme) + 1:
            raise NonSquareError(f"row {label!r} has {len(row) - 1} counts, expected {len(scheme)}")
        try:
            matrix.append([int(cell) for cell in row[1:]])
        except ValueError:
            raise ValidationError(f"row {label!r} holds a non-integer count") from None
    return AgreementTable.from_counts(matrix, scheme)


def _write_rows(scheme: CategoryScheme, cells: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["", *scheme.labels])
    for label, row in zip(scheme.labels, cells):
        writer.writerow([label, *row])
    return buffer.getvalue()


def format_table_csv(table: AgreementTable) -> str:
    return _write_rows(table.scheme, ([str(int(c)) for c in row] for row in table.counts))


def format_proportion_csv(table: ProportionTable, decimals: int = 6) -> str:
    return _write_rows(table.scheme, ([f"{p:.{decimals}f}" for p in row] for row in table.props))
