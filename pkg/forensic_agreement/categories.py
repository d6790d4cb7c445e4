"""Conclusion category schemes and pooling transformations between them."""
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Iterable, List, Mapping, Tuple

import numpy as np

from forensic_agreement.exceptions import (
    InvalidArgumentError,
    InvalidSchemeError,
    SchemeMismatchError,
)

if TYPE_CHECKING:
    from forensic_agreement.agreement import AgreementTable

IDENTIFICATION = "Identification"
INCONCLUSIVE_A = "Inconclusive-A"
INCONCLUSIVE_B = "Inconclusive-B"
INCONCLUSIVE_C = "Inconclusive-C"
ELIMINATION = "Elimination"
UNSUITABLE = "Unsuitable"

AFTE_LABELS = (
    IDENTIFICATION,
    INCONCLUSIVE_A,
    INCONCLUSIVE_B,
    INCONCLUSIVE_C,
    ELIMINATION,
    UNSUITABLE,
)

POOL_INCONCLUSIVES = "pool_inconclusives"
POOL_TO_LEAN = "pool_to_lean"

SCORING_SCHEMES = ("none", POOL_INCONCLUSIVES, POOL_TO_LEAN)
"""Scorings applied by ``analyze``: unpooled plus the two builtin poolings."""


@dataclass(frozen=True)
class CategoryScheme:
    """Ordered set of conclusion labels; the order fixes every table's layout."""

    labels: Tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 2:
            raise InvalidSchemeError(f"a scheme needs at least 2 labels, got {len(labels)}")
        seen = set()
        for label in labels:
            if not isinstance(label, str) or not label:
                raise InvalidSchemeError(f"invalid label {label!r}")
            if label in seen:
                raise InvalidSchemeError(f"duplicate label {label!r}")
            seen.add(label)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidArgumentError(f"unknown label {label!r}") from None


@dataclass(frozen=True)
class PoolingScheme:
    """Total, surjective map from source labels onto a coarser target scheme."""

    source: CategoryScheme
    target: CategoryScheme
    mapping: Tuple[Tuple[str, str], ...] = field(repr=False)

    def __post_init__(self) -> None:
        mapped = dict(self.mapping)
        if set(mapped) != set(self.source.labels) or len(mapped) != len(self.mapping):
            raise InvalidSchemeError("pooling must map every source label exactly once")
        images = set(mapped.values())
        if images != set(self.target.labels):
            raise InvalidSchemeError("pooling target labels must each be the image of a source label")
        if self.target.labels != _induced_order(self.source, mapped):
            raise InvalidSchemeError("pooling target order must follow first appearance in the source")

    def map(self, label: str) -> str:
        """Return the target label for a source label."""
        for source_label, target_label in self.mapping:
            if source_label == label:
                return target_label
        raise InvalidArgumentError(f"label {label!r} is not in the pooling source")

    def preimage(self, target: str) -> Tuple[str, ...]:
        """Source labels that pool into ``target``, in source order."""
        if target not in self.target:
            raise InvalidArgumentError(f"label {target!r} is not in the pooling target")
        return tuple(source_label for source_label, target_label in self.mapping if target_label == target)

    def indicator(self) -> np.ndarray:
        """K_source x K_target 0/1 matrix with a single 1 per row."""
        matrix = np.zeros((len(self.source), len(self.target)), dtype=np.int64)
        for source_label, target_label in self.mapping:
            matrix[self.source.index(source_label), self.target.index(target_label)] = 1
        return matrix


def _induced_order(source: CategoryScheme, mapping: Mapping[str, str]) -> Tuple[str, ...]:
    order: List[str] = []
    for label in source.labels:
        target = mapping[label]
        if target not in order:
            order.append(target)
    return tuple(order)


def full_afte_scheme() -> CategoryScheme:
    """The six AFTE conclusions in canonical order."""
    return CategoryScheme(AFTE_LABELS)


def pooling_from_mapping(source: CategoryScheme, mapping: Mapping[str, str]) -> PoolingScheme:
    """Build a pooling from a label map; labels the map omits keep their own name.

    Raises:
        InvalidSchemeError: If the map names a label outside ``source``
    """
    unknown = [label for label in mapping if label not in source]
    if unknown:
        raise InvalidSchemeError(f"pooling names unknown source labels: {', '.join(unknown)}")
    total = {label: mapping.get(label, label) for label in source.labels}
    target = CategoryScheme(_induced_order(source, total))
    return PoolingScheme(
        source=source,
        target=target,
        mapping=tuple((label, total[label]) for label in source.labels),
    )


def identity_pooling(scheme: CategoryScheme) -> PoolingScheme:
    return pooling_from_mapping(scheme, {})


def builtin_pooling(name: str) -> PoolingScheme:
    """Return one of the two published pooling schemes over the AFTE scale.

    ``pool_inconclusives`` merges the three inconclusives; ``pool_to_lean``
    merges Identification with Inconclusive-A and Elimination with
    Inconclusive-C. Unsuitable stays separate under both.

    Raises:
        InvalidArgumentError: If ``name`` is not a builtin pooling
    """
    if name == POOL_INCONCLUSIVES:
        mapping = {
            INCONCLUSIVE_A: "Inconclusive",
            INCONCLUSIVE_B: "Inconclusive",
            INCONCLUSIVE_C: "Inconclusive",
        }
    elif name == POOL_TO_LEAN:
        mapping = {
            IDENTIFICATION: "ID∪Inc-A",
            INCONCLUSIVE_A: "ID∪Inc-A",
            INCONCLUSIVE_C: "Elim∪Inc-C",
            ELIMINATION: "Elim∪Inc-C",
        }
    else:
        raise InvalidArgumentError(
            f"unknown pooling {name!r}; expected {POOL_INCONCLUSIVES} or {POOL_TO_LEAN}"
        )
    return pooling_from_mapping(full_afte_scheme(), mapping)


def parse_pooling(lines: Iterable[str], source: CategoryScheme) -> PoolingScheme:
    """Parse ``source_label -> target_label`` lines into a pooling.

    Blank lines and ``#`` comments are skipped. Labels match exactly.
    """
    mapping: Dict[str, str] = {}
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "->" not in line:
            raise InvalidSchemeError(f"pooling line {number}: expected 'source -> target'")
        source_label, target_label = (part.strip() for part in line.split("->", 1))
        if not source_label or not target_label:
            raise InvalidSchemeError(f"pooling line {number}: empty label")
        if mapping.get(source_label, target_label) != target_label:
            raise InvalidSchemeError(
                f"pooling line {number}: {source_label!r} already maps to {mapping[source_label]!r}"
            )
        mapping[source_label] = target_label
    return pooling_from_mapping(source, mapping)


def apply_pooling(table: "AgreementTable", pooling: PoolingScheme) -> "AgreementTable":
    """Sum the cells of ``table`` into the blocks defined by ``pooling``.

    Raises:
        SchemeMismatchError: If the table's scheme is not the pooling source
    """
    from forensic_agreement.agreement import AgreementTable

    if table.scheme != pooling.source:
        raise SchemeMismatchError(
            f"table scheme {list(table.scheme.labels)} does not match pooling source "
            f"{list(pooling.source.labels)}"
        )
    indicator = pooling.indicator()
    pooled = indicator.T @ table.counts @ indicator
    return AgreementTable.from_counts(pooled, pooling.target)
