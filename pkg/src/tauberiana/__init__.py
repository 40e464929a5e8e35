"""Numerical verification of Tauberian asymptotics for general Dirichlet series."""

from .errors import (BudgetError, ConfigError, ConvergenceError, DomainError, InvalidParams,
                     OverflowGuard, SpecError, TauberianaError)
from .series_core import SeriesSpec, bundled_spec, enumerate_terms, evaluate_series, partial_sum
from .residue_engine import PoleData, bundled_pole, laurent_coefficients, main_term, residue_polynomial
from .smoothing import WeightParams, build_weight, weight_mellin
from .harness import ExperimentConfig, VerificationReport, run_config

__all__ = [
    "BudgetError", "ConfigError", "ConvergenceError", "DomainError", "InvalidParams", "OverflowGuard",
    "SpecError", "TauberianaError", "SeriesSpec", "bundled_spec", "enumerate_terms", "evaluate_series",
    "partial_sum", "PoleData", "bundled_pole", "laurent_coefficients", "main_term", "residue_polynomial",
    "WeightParams", "build_weight", "weight_mellin", "ExperimentConfig", "VerificationReport", "run_config",
]
__version__ = "0.1.0"
