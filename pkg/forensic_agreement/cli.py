"""Command-line front end.

Exit status: 0 on success, 2 for usage and configuration errors, 1 for
input validation and I/O errors. All randomness comes from ``--seed``.
"""
import argparse
import logging
import sys
from typing import List, Optional, Sequence, TextIO

import pydantic

import forensic_agreement.commands  # noqa: F401  registers the subcommands
from forensic_agreement import __version__
from forensic_agreement.base import CommandRegistry
from forensic_agreement.exceptions import ConfigurationError
from forensic_agreement.types import DEFAULT_SEED, RunConfig


def _floats(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _labels(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _add_display(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--decimals", type=int, default=1, help="decimals for percentages (default 1)")
    parser.add_argument("--kappa-decimals", type=int, default=4, help="decimals for kappa (default 4)")


def _add_exclude(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--exclude", action="append", default=[], metavar="LABEL",
        help="drop pairs involving LABEL (repeatable)",
    )


def _add_model(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pi", type=float, required=True, help="precise-perception rate in [0, 1]")
    parser.add_argument("--p", type=_floats, required=True, help="category probabilities, e.g. 0.1,0.5,0.4")
    parser.add_argument("--labels", type=_labels, help="category labels, comma-separated")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forensic-agreement",
        description="Repeatability and reproducibility analysis of categorical conclusions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log to stderr (-v info, -vv debug)")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    stats = sub.add_parser("stats", help="P_o, P_e and kappa of a table CSV")
    stats.add_argument("--table", type=str, required=True, help="table CSV (header: empty cell then labels)")
    stats.add_argument("--scheme", choices=["auto", "afte"], default="auto",
                       help="take labels from the header (auto) or require the six AFTE labels")
    stats.add_argument("--pooling", default="none",
                       help="none, pool_inconclusives, pool_to_lean or a 'source -> target' file")
    stats.add_argument("--format", choices=["text", "csv", "json"], default="text")
    _add_exclude(stats)
    _add_display(stats)

    pool = sub.add_parser("pool", help="pool a table's categories; writes the pooled table CSV")
    pool.add_argument("--table", type=str, required=True)
    pool.add_argument("--scheme", choices=["auto", "afte"], default="auto")
    pool.add_argument("--pooling", required=True,
                      help="pool_inconclusives, pool_to_lean or a 'source -> target' file")

    analyze = sub.add_parser("analyze", help="full analysis of a records CSV")
    analyze.add_argument("--records", type=str, required=True,
                         help="CSV: examiner_id,set_id,round,material,ground_truth,conclusion")
    analyze.add_argument(
        "--out", type=str, required=True,
        help="output stem; for each kind (repeatability, reproducibility) writes "
             "<stem>.<kind>.summary.txt, <stem>.<kind>.summary.csv, <stem>.<kind>.signtest.txt, "
             "<stem>.<kind>.isolines.txt and <stem>.<kind>.<material>.<stratum>.<scheme>.svg",
    )
    analyze.add_argument("--isolines", type=_floats, default=[0.0, 0.8], help="kappa isolines (default 0,0.8)")
    _add_exclude(analyze)
    _add_display(analyze)

    model = sub.add_parser("model", help="closed-form guessing-model table and kappa")
    _add_model(model)
    model.add_argument("--kappa-decimals", type=int, default=4)

    simulate = sub.add_parser("simulate", help="seeded simulation of the guessing model")
    _add_model(simulate)
    simulate.add_argument("--n", type=int, required=True, help="sequence length")
    simulate.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"RNG seed (default {DEFAULT_SEED})")
    simulate.add_argument("--kappa-decimals", type=int, default=4)

    signtest = sub.add_parser("signtest", help="sign test over (observed, expected) rows")
    signtest.add_argument("--input", type=str, required=True, help="CSV with observed,expected columns")

    plot = sub.add_parser("plot", help="observed-vs-expected scatter plot")
    plot.add_argument("--points", type=str, required=True, help="CSV: subject,p_expected,p_observed")
    plot.add_argument("--out", type=str, required=True, help="output stem; writes <stem>.svg")
    plot.add_argument("--isolines", type=_floats, default=[0.0, 0.8])
    plot.add_argument("--title", default="")

    return parser


def _configure_logging(verbosity: int, stream: TextIO) -> None:
    if verbosity == 0:
        return
    level = logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(stream=stream, level=level, format="%(levelname)s %(name)s: %(message)s", force=True)


def run(args: Sequence[str], stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """Run one subcommand and return its exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        namespace = parser.parse_args(list(args))
    except SystemExit as e:
        return int(e.code or 0)

    _configure_logging(namespace.verbose, stderr)
    options = {key: value for key, value in vars(namespace).items() if key != "verbose" and value is not None}
    try:
        config = RunConfig(**options)
        command = CommandRegistry.get(config.subcommand)(config)
    except pydantic.ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"])
        print(f"error: --{field.replace('_', '-')}: {error['msg']}", file=stderr)
        return 2
    except ConfigurationError as e:
        print(f"error: {e}", file=stderr)
        return 2

    response = command.execute()
    logging.debug(f"{response.metadata}")
    if not response.success:
        print(f"error: {response.error}", file=stderr)
        return response.exit_code
    stdout.write(response.data)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
