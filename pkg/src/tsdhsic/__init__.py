"""Kernel joint-independence tests (dHSIC) for single- and multi-realisation time series."""

from .errors import TsdhsicError
from .estimator import DhsicStatistic, GramSet, dhsic_from_grams, dhsic_multi_realisation, dhsic_naive, dhsic_single_realisation
from .kernel import KernelConfig, gram_matrix, median_heuristic_bandwidth
from .panel import TimeSeriesPanel
from .power import PowerCurve, null_sample_robustness, power_sweep
from .resampling import (
    NullDistribution,
    TestConfig,
    TestResult,
    empirical_threshold,
    joint_independence_test,
    permutation_null,
    shift_null,
)
from .scan import DependenceHypergraph, scan_higher_order
from .synthgen import GeneratorSpec, extract_phase, generate

__all__ = [
    "DependenceHypergraph",
    "DhsicStatistic",
    "GeneratorSpec",
    "GramSet",
    "KernelConfig",
    "NullDistribution",
    "PowerCurve",
    "TestConfig",
    "TestResult",
    "TimeSeriesPanel",
    "TsdhsicError",
    "dhsic_from_grams",
    "dhsic_multi_realisation",
    "dhsic_naive",
    "dhsic_single_realisation",
    "empirical_threshold",
    "extract_phase",
    "generate",
    "gram_matrix",
    "joint_independence_test",
    "median_heuristic_bandwidth",
    "null_sample_robustness",
    "permutation_null",
    "power_sweep",
    "scan_higher_order",
    "shift_null",
]

__version__ = "0.1.0"
