"""
Forensic Agreement Commands
===========================

Concrete implementations of the CLI subcommands. Importing this package
registers every command with :class:`~forensic_agreement.base.CommandRegistry`.
"""

from forensic_agreement.commands.analysis import AnalyzeCommand, PlotCommand, SignTestCommand
from forensic_agreement.commands.simulation import ModelCommand, SimulateCommand
from forensic_agreement.commands.tables import PoolCommand, StatsCommand

__all__ = [
    "AnalyzeCommand",
    "ModelCommand",
    "PlotCommand",
    "PoolCommand",
    "SignTestCommand",
    "SimulateCommand",
    "StatsCommand",
]
