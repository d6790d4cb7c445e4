"""Test fixtures and reference tables for testing."""
from pathlib import Path
from typing import List, Sequence

from forensic_agreement.agreement import AgreementTable
from forensic_agreement.base import BaseCommand
from forensic_agreement.categories import CategoryScheme, full_afte_scheme

DATA_DIR = Path(__file__).parent / "data"

# Bullet repeatability, rows first round and columns second, AFTE order.
MATCHING_COUNTS = [
    [665, 27, 26, 14, 8, 2],
    [31, 28, 12, 6, 2, 0],
    [13, 14, 45, 5, 2, 2],
    [2, 3, 3, 5, 3, 0],
    [8, 7, 3, 2, 13, 0],
    [1, 3, 3, 0, 0, 2],
]

NONMATCHING_COUNTS = [
    [2, 3, 6, 2, 6, 0],
    [0, 52, 37, 42, 27, 0],
    [5, 31, 341, 98, 45, 7],
    [1, 32, 109, 284, 53, 1],
    [1, 20, 35, 66, 514, 4],
    [0, 0, 13, 6, 4, 8],
]

# Three-category observer tables with a shared 10/50/40 marginal.
COLOR_LABELS = ("b", "r", "g")
OBSERVER_A_COUNTS = [[10, 0, 0], [0, 50, 0], [0, 0, 40]]
OBSERVER_B_COUNTS = [[1, 5, 4], [5, 25, 20], [4, 20, 16]]
OBSERVER_C_COUNTS = [[8, 1, 1], [1, 45, 4], [1, 4, 35]]


def afte_table(counts: Sequence[Sequence[int]]) -> AgreementTable:
    return AgreementTable.from_counts(counts, full_afte_scheme())


def color_table(counts: Sequence[Sequence[int]]) -> AgreementTable:
    return AgreementTable.from_counts(counts, CategoryScheme(COLOR_LABELS))


def record_rows(rows: Sequence[Sequence[object]]) -> List[str]:
    """Records CSV lines, header first."""
    lines = ["examiner_id,set_id,round,material,ground_truth,conclusion"]
    lines.extend(",".join(str(cell) for cell in row) for row in rows)
    return [f"{line}\n" for line in lines]


def write_text(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


class MockCommand(BaseCommand):
    """Mock command implementation for testing."""

    name = "stats"

    def _validate_config(self) -> None:
        self._require("table")

    def _run(self) -> str:
        return f"mock: {self.config.table.name}"


class FailingCommand(BaseCommand):
    """Command whose work always fails with a library error."""

    name = "signtest"

    def _validate_config(self) -> None:
        pass

    def _run(self) -> str:
        from forensic_agreement.inference import sign_test

        sign_test([0.0, 0.0])
        return "unreachable"


class BrokenCommand(BaseCommand):
    """Command whose work fails with an error from outside the library."""

    name = "plot"

    def _validate_config(self) -> None:
        pass

    def _run(self) -> str:
        raise RuntimeError("renderer crashed")
