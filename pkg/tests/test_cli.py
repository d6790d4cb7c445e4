"""Tests for the command-line front end."""
import csv
import io
import json
import logging
import xml.etree.ElementTree as ET

import pytest

from forensic_agreement.agreement import read_table_csv
from forensic_agreement.cli import run
from forensic_agreement.ingest import format_records_csv, synthesize_records
from tests.fixtures import DATA_DIR, MATCHING_COUNTS, NONMATCHING_COUNTS, afte_table, write_text

MATCHING = str(DATA_DIR / "bullet_matching.csv")
NONMATCHING = str(DATA_DIR / "bullet_nonmatching.csv")


def _run(*args):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run(list(args), stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


def _fields(text):
    return dict(line.split(": ", 1) for line in text.splitlines())


@pytest.fixture
def records_file(tmp_path):
    """Records of two examiners over the bullet repeatability tables."""
    records = []
    for examiner_id in ("E001", "E002"):
        records += synthesize_records(afte_table(MATCHING_COUNTS), "bullet", "matching", examiner_id)
        records += synthesize_records(afte_table(NONMATCHING_COUNTS), "bullet", "nonmatching", examiner_id)
    return write_text(tmp_path / "records.csv", format_records_csv(records))


class TestStats:
    """Test suite for the stats subcommand."""

    def test_matching_table(self):
        """Test the summary of the matching table."""
        code, out, err = _run("stats", "--table", MATCHING)
        assert code == 0, err
        fields = _fields(out)
        assert fields["n"] == "960"
        assert fields["P_o"] == "79.0%"
        assert fields["P_e"] == "59.6%"
        assert fields["disagreement"] == "21.0%"
        assert fields["kappa"] == "0.4786"
        assert fields["band"] == "Weak"
        assert fields["marginals (rows)"].startswith("Identification=77.3%, ")

    def test_nonmatching_table(self):
        """Test the summary of the nonmatching table with the AFTE scheme enforced."""
        code, out, _ = _run("stats", "--table", NONMATCHING, "--scheme", "afte", "--kappa-decimals", "2")
        assert code == 0
        assert _fields(out)["kappa"] == "0.51"
        assert _fields(out)["P_o"] == "64.7%"

    def test_two_decimal_percentages(self):
        """Test expected agreement printed to two decimals."""
        code, out, _ = _run("stats", "--table", NONMATCHING, "--decimals", "2", "--kappa-decimals", "3")
        assert code == 0
        assert _fields(out)["P_e"] == "27.96%"
        assert _fields(out)["kappa"] == "0.511"

    def test_pool_then_stats(self, tmp_path):
        """Test feeding the pooled table back into stats."""
        code, pooled, _ = _run("pool", "--table", NONMATCHING, "--pooling", "pool_inconclusives")
        assert code == 0
        path = write_text(tmp_path / "pooled.csv", pooled)
        code, out, _ = _run("stats", "--table", str(path))
        assert code == 0
        assert _fields(out)["P_o"] == "83.6%"
        assert _fields(out)["n"] == "1855"

    @pytest.mark.parametrize("pooling, agreement", [
        ("pool_inconclusives", "83.4%"),
        ("pool_to_lean", "85.5%"),
    ])
    def test_builtin_pooling(self, pooling, agreement):
        """Test pooled observed agreement."""
        code, out, _ = _run("stats", "--table", MATCHING, "--pooling", pooling)
        assert code == 0
        assert _fields(out)["P_o"] == agreement

    def test_pooling_file(self, tmp_path):
        """Test a user-supplied pooling file."""
        mapping = write_text(tmp_path / "lean.txt", "Inconclusive-A -> Identification\nInconclusive-C -> Elimination\n")
        code, out, err = _run("stats", "--table", MATCHING, "--pooling", str(mapping))
        assert code == 0, err
        assert _fields(out)["P_o"] == "85.5%"

    def test_exclude(self):
        """Test dropping Unsuitable evaluations."""
        code, out, _ = _run("stats", "--table", MATCHING, "--exclude", "Unsuitable")
        assert code == 0
        assert _fields(out)["n"] == "947"

    @pytest.mark.parametrize("pooling, agreement, labels", [
        ("pool_inconclusives", "84.4%", ["Identification", "Inconclusive", "Elimination"]),
        ("pool_to_lean", "86.5%", ["ID∪Inc-A", "Inconclusive-B", "Elim∪Inc-C"]),
    ])
    def test_exclude_with_pooling(self, pooling, agreement, labels):
        """Test pooled scorings with Unsuitable evaluations left out."""
        code, out, err = _run("stats", "--table", MATCHING, "--exclude", "Unsuitable", "--pooling", pooling)
        assert code == 0, err
        fields = _fields(out)
        assert fields["n"] == "947"
        assert fields["P_o"] == agreement
        rows = [cell.split("=")[0] for cell in fields["marginals (rows)"].split(", ")]
        assert rows == labels

    def test_exclude_unknown_with_pooling(self):
        """Test that an unknown excluded label is still an input error under pooling."""
        code, _, err = _run("stats", "--table", MATCHING, "--exclude", "Exclusion", "--pooling", "pool_to_lean")
        assert code == 1
        assert "Exclusion" in err

    def test_json(self):
        """Test machine-readable output."""
        code, out, _ = _run("stats", "--table", NONMATCHING, "--format", "json")
        assert code == 0
        (row,) = json.loads(out)["rows"]
        assert row["n"] == 1855
        assert row["p_expected"] == pytest.approx(962102 / 3441025)

    def test_csv(self):
        """Test CSV output."""
        code, out, _ = _run("stats", "--table", MATCHING, "--format", "csv")
        assert code == 0
        (row,) = list(csv.DictReader(out.splitlines()))
        assert row["p_observed"] == "0.789583"

    def test_degenerate(self, tmp_path):
        """Test that a one-cell table reports no kappa instead of failing."""
        table = write_text(tmp_path / "one.csv", ",a,b\na,5,0\nb,0,0\n")
        code, out, _ = _run("stats", "--table", str(table))
        assert code == 0
        assert _fields(out)["kappa"] == "n/a (degenerate)"
        assert "band" not in _fields(out)

    def test_scheme_mismatch(self):
        """Test that --scheme afte rejects other headers."""
        code, _, err = _run("stats", "--table", str(DATA_DIR / "observer_c.csv"), "--scheme", "afte")
        assert code == 1
        assert err.startswith("error: ")

    def test_missing_file(self, tmp_path):
        """Test that a missing table is an I/O error."""
        code, out, err = _run("stats", "--table", str(tmp_path / "absent.csv"))
        assert code == 1
        assert out == ""
        assert "cannot access" in err

    def test_missing_argument(self):
        """Test that argparse usage errors exit with status 2."""
        code, _, _ = _run("stats")
        assert code == 2

    def test_bad_option_value(self):
        """Test that invalid option values exit with status 2."""
        code, _, err = _run("stats", "--table", MATCHING, "--decimals", "20")
        assert code == 2
        assert "--decimals" in err

    def test_malformed_table(self, tmp_path):
        """Test that a table with negative counts is rejected."""
        table = write_text(tmp_path / "bad.csv", ",a,b\na,5,-1\nb,0,3\n")
        code, _, err = _run("stats", "--table", str(table))
        assert code == 1
        assert "non-negative" in err


class TestPool:
    """Test suite for the pool subcommand."""

    def test_pool_inconclusives(self):
        """Test the pooled table CSV."""
        code, out, _ = _run("pool", "--table", MATCHING, "--pooling", "pool_inconclusives")
        assert code == 0
        assert out.splitlines()[0] == ",Identification,Inconclusive,Elimination,Unsuitable"
        table = read_table_csv(out.splitlines())
        assert table.total == 960
        assert table.counts[1, 1] == 121

    def test_requires_pooling(self):
        """Test that pool needs a pooling scheme."""
        code, _, _ = _run("pool", "--table", MATCHING)
        assert code == 2


class TestGuessingCommands:
    """Test suite for the model and simulate subcommands."""

    def test_model(self):
        """Test the closed-form table of the color example."""
        code, out, _ = _run("model", "--pi", "0.8", "--p", "0.1,0.5,0.4", "--labels", "b,r,g")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == ",b,r,g"
        assert lines[1] == "b,0.082000,0.010000,0.008000"
        assert lines[-1] == "kappa,0.8000"

    def test_model_degenerate(self):
        """Test a distribution concentrated on one category."""
        code, out, _ = _run("model", "--pi", "0.5", "--p", "1,0")
        assert code == 0
        assert out.splitlines()[-1] == "kappa,degenerate"

    def test_model_bad_distribution(self):
        """Test that p must sum to one."""
        code, _, err = _run("model", "--pi", "0.5", "--p", "0.5,0.6")
        assert code == 1
        assert "sum to 1" in err

    def test_model_bad_pi(self):
        """Test that pi must lie in [0, 1]."""
        code, _, err = _run("model", "--pi", "1.5", "--p", "0.5,0.5")
        assert code == 2
        assert "--pi" in err

    def test_simulate_reproducible(self):
        """Test that a seed fixes the simulated table."""
        args = ("simulate", "--pi", "0.8", "--p", "0.1,0.5,0.4", "--n", "5000", "--seed", "7")
        first, second = _run(*args), _run(*args)
        assert first == second
        code, out, _ = first
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "# seed=7, generator=numpy.PCG64, n=5000"
        assert lines[1] == ",C1,C2,C3"
        assert lines[-1].startswith("kappa_hat,0.")
        assert read_table_csv(lines[1:-1]).total == 5000

    def test_simulate_default_seed(self):
        """Test that the default seed is reported."""
        code, out, _ = _run("simulate", "--pi", "0.5", "--p", "0.5,0.5", "--n", "100")
        assert code == 0
        assert out.startswith("# seed=20220527, ")


class TestSignTest:
    """Test suite for the signtest subcommand."""

    def test_signtest(self, tmp_path):
        """Test the sign test over a points file."""
        lines = ["observed,expected"] + ["0.9,0.5"] * 20 + ["0.5,0.5"]
        data = write_text(tmp_path / "pairs.csv", "\n".join(lines) + "\n")
        code, out, _ = _run("signtest", "--input", str(data))
        assert code == 0
        machine = out.splitlines()[-1]
        assert machine.startswith("signtest n_positive=20 n_negative=0 n_zero=1 n_effective=20 ")
        p_value = float(dict(p.split("=") for p in machine.split()[1:])["p_value"])
        assert p_value == pytest.approx(2.0 ** -20)

    def test_signtest_all_ties(self, tmp_path):
        """Test that a sample without signs is an error."""
        data = write_text(tmp_path / "ties.csv", "0.5,0.5\n0.7,0.7\n")
        code, _, err = _run("signtest", "--input", str(data))
        assert code == 1
        assert "no information" in err


class TestPlot:
    """Test suite for the plot subcommand."""

    def test_plot(self, tmp_path):
        """Test that a plot file is written and parses as SVG."""
        points = write_text(tmp_path / "points.csv", "subject,p_expected,p_observed\nE1,0.5,0.5\nE2,0.3,0.8\n")
        stem = tmp_path / "scatter"
        code, out, _ = _run("plot", "--points", str(points), "--out", str(stem), "--title", "Test")
        assert code == 0
        assert out.startswith("wrote ")
        root = ET.parse(tmp_path / "scatter.svg").getroot()
        assert root.get("viewBox") == "0 0 600 600"

    def test_plot_point_outside(self, tmp_path):
        """Test that points must be proportions."""
        points = write_text(tmp_path / "points.csv", "E1,0.5,1.5\n")
        code, _, err = _run("plot", "--points", str(points), "--out", str(tmp_path / "x"))
        assert code == 1
        assert "unit square" in err


class TestAnalyze:
    """Test suite for the analyze subcommand."""

    def test_outputs(self, tmp_path, records_file):
        """Test that every summary, sign test and plot file is written."""
        stem = tmp_path / "study"
        code, out, err = _run("analyze", "--records", str(records_file), "--out", str(stem))
        assert code == 0, err
        for kind in ("repeatability", "reproducibility"):
            for suffix in ("summary.txt", "summary.csv", "signtest.txt", "isolines.txt"):
                assert (tmp_path / f"study.{kind}.{suffix}").is_file()
            for stratum in ("matching", "nonmatching"):
                for scoring in ("none", "pool_inconclusives", "pool_to_lean"):
                    assert (tmp_path / f"study.{kind}.bullet.{stratum}.{scoring}.svg").is_file()
        assert "repeatability:" in out

    def test_repeatability_summary(self, tmp_path, records_file):
        """Test that pooled repeatability matches the source tables."""
        stem = tmp_path / "study"
        assert _run("analyze", "--records", str(records_file), "--out", str(stem))[0] == 0
        with open(tmp_path / "study.repeatability.summary.csv", encoding="utf-8", newline="") as handle:
            rows = list(csv.DictReader(handle))
        pooled = {
            (r["stratum"], r["scheme"]): r for r in rows if r["subject"] == "ALL"
        }
        assert pooled[("matching", "none")]["n"] == "1920"
        assert pooled[("matching", "none")]["p_observed"] == "0.789583"
        assert float(pooled[("nonmatching", "none")]["kappa"]) == pytest.approx(0.5106, abs=1e-4)
        assert pooled[("matching", "pool_inconclusives")]["p_observed"] == "0.834375"
        examiners = {r["subject"] for r in rows}
        assert examiners == {"ALL", "E001", "E002", "AVERAGE"}

    @pytest.mark.parametrize("stratum, table, scoring", [
        ("matching", MATCHING, "none"),
        ("nonmatching", NONMATCHING, "none"),
        ("matching", MATCHING, "pool_to_lean"),
        ("nonmatching", NONMATCHING, "pool_inconclusives"),
    ])
    def test_matches_stats(self, tmp_path, records_file, stratum, table, scoring):
        """Test that pooled analyze rows equal the stats path exactly."""
        assert _run("analyze", "--records", str(records_file), "--out", str(tmp_path / "study"))[0] == 0
        with open(tmp_path / "study.repeatability.summary.csv", encoding="utf-8", newline="") as handle:
            (analyzed,) = [
                r for r in csv.DictReader(handle)
                if (r["subject"], r["stratum"], r["scheme"]) == ("ALL", stratum, scoring)
            ]
        code, out, _ = _run("stats", "--table", table, "--pooling", scoring, "--format", "csv")
        assert code == 0
        (direct,) = list(csv.DictReader(out.splitlines()))
        for column in ("p_observed", "p_expected", "kappa", "band"):
            assert analyzed[column] == direct[column]

    def test_reproducibility_summary(self, tmp_path, records_file):
        """Test that identical first rounds reproduce perfectly."""
        stem = tmp_path / "study"
        assert _run("analyze", "--records", str(records_file), "--out", str(stem))[0] == 0
        with open(tmp_path / "study.reproducibility.summary.csv", encoding="utf-8", newline="") as handle:
            rows = list(csv.DictReader(handle))
        pair = [r for r in rows if r["subject"] == "E001|E002" and r["scheme"] == "none"]
        assert {r["p_observed"] for r in pair} == {"1.000000"}
        assert {r["n"] for r in pair} == {"960", "1855"}

    def test_signtest_file(self, tmp_path, records_file):
        """Test one sign-test line per group of examiners."""
        stem = tmp_path / "study"
        assert _run("analyze", "--records", str(records_file), "--out", str(stem))[0] == 0
        lines = (tmp_path / "study.repeatability.signtest.txt").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 6
        assert lines[0].startswith("bullet matching none: signtest n_positive=2 n_negative=0")

    def test_isolines_file(self, tmp_path, records_file):
        """Test the isoline counts written for each group of examiners."""
        stem = tmp_path / "study"
        assert _run("analyze", "--records", str(records_file), "--out", str(stem))[0] == 0
        lines = (tmp_path / "study.repeatability.isolines.txt").read_text(encoding="utf-8").splitlines()
        assert lines[:5] == [
            "bullet matching none (2 subjects, 0 degenerate)",
            "  kappa >= 0.00: 2 (100.0%)",
            "  kappa >= 0.80: 0 (0.0%)",
            "  P_o < P_e: 0 (0.0%)",
            "  P_o >= 90.0%: 0 (0.0%)",
        ]
        assert sum(1 for line in lines if "subjects" in line) == 6

    def test_single_round_has_no_repeatability(self, tmp_path):
        """Test a study where every set was seen once."""
        records = write_text(
            tmp_path / "once.csv",
            "examiner_id,set_id,round,material,ground_truth,conclusion\n"
            "E1,S1,1,bullet,matching,Identification\n"
            "E2,S1,1,bullet,matching,Identification\n"
            "E1,S2,1,bullet,matching,Inconclusive-B\n"
            "E2,S2,1,bullet,matching,Elimination\n",
        )
        code, out, _ = _run("analyze", "--records", str(records), "--out", str(tmp_path / "once"))
        assert code == 0
        assert "repeatability: no pairs" in out
        assert (tmp_path / "once.reproducibility.summary.txt").is_file()

    def test_malformed_records(self, tmp_path):
        """Test that record errors carry their line number."""
        records = write_text(
            tmp_path / "bad.csv",
            "examiner_id,set_id,round,material,ground_truth,conclusion\n"
            "E1,S1,1,bullet,matching,Identification\n"
            "E1,S1,2,bullet,matching,Exclusion\n",
        )
        code, _, err = _run("analyze", "--records", str(records), "--out", str(tmp_path / "bad"))
        assert code == 1
        assert "line 3" in err

    def test_verbose_logging(self, tmp_path, records_file):
        """Test that -v logs written files to stderr."""
        root = logging.getLogger()
        handlers, level = root.handlers[:], root.level
        try:
            code, _, err = _run("-v", "analyze", "--records", str(records_file), "--out", str(tmp_path / "v"))
        finally:
            root.handlers[:] = handlers
            root.setLevel(level)
        assert code == 0
        assert "INFO" in err
        assert "wrote" in err


def test_version(capsys):
    """Test the version flag."""
    assert run(["--version"]) == 0
    assert "forensic-agreement" in capsys.readouterr().out


def test_analyze_help_names_outputs(capsys):
    """Test that the --out help spells out the output file names."""
    assert run(["analyze", "--help"]) == 0
    out = capsys.readouterr().out
    for name in ("<stem>.<kind>.summary.txt", "<stem>.<kind>.signtest.txt", "<stem>.<kind>.isolines.txt"):
        assert name in out
