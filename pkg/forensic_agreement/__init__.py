"""
Forensic Agreement
==================

Repeatability and reproducibility analysis for categorical forensic
conclusions: agreement tables, chance-expected agreement, Cohen's kappa,
category pooling, the sign test, the shrewd-guessing model and SVG plots.
"""

from forensic_agreement.agreement import (
    AgreementSummary,
    AgreementTable,
    ProportionTable,
    cohen_kappa,
    expected_agreement,
    expected_table,
    from_counts,
    marginals,
    observed_agreement,
    proportion_table,
    summarize,
)
from forensic_agreement.categories import (
    CategoryScheme,
    PoolingScheme,
    apply_pooling,
    builtin_pooling,
    full_afte_scheme,
)
from forensic_agreement.exceptions import AgreementError
from forensic_agreement.guessing import GuessingModel, model_kappa, model_table, simulate_run, sweep_kappa
from forensic_agreement.inference import box_stats, interpret_kappa, kappa_isoline, sign_test

__version__ = "0.2.0"
__all__ = [
    "AgreementError",
    "AgreementSummary",
    "AgreementTable",
    "CategoryScheme",
    "GuessingModel",
    "PoolingScheme",
    "ProportionTable",
    "apply_pooling",
    "box_stats",
    "builtin_pooling",
    "cohen_kappa",
    "expected_agreement",
    "expected_table",
    "from_counts",
    "full_afte_scheme",
    "interpret_kappa",
    "kappa_isoline",
    "marginals",
    "model_kappa",
    "model_table",
    "observed_agreement",
    "proportion_table",
    "sign_test",
    "simulate_run",
    "summarize",
    "sweep_kappa",
]
