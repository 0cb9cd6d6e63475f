"""Null distributions by cyclic shifting or permutation, and the full test.

Single-realisation panels get a shifting null: each variable other than the
first is rotated in time by an independent offset drawn uniformly from
``{1, ..., T-1}``. Multi-realisation panels get a permutation null: the
realisation labels of each variable other than the first are shuffled.
Either way the null statistics are the observed Gram matrices re-indexed,
with bandwidths fixed from the observed data.

Randomness for null sample ``s`` and variable ``j`` comes from its own
stream seeded by ``(seed, s, j)``, so a null of size ``S`` is a prefix of
any larger null with the same seed, independent of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .errors import DegenerateLength, EmptyNull, ModeMismatch, SpecError
from .estimator import GramSet, panel_grams
from .kernel import KernelConfig
from .panel import TimeSeriesPanel

METHODS = ("shift", "permute", "auto")
_BATCH = 256


@dataclass(frozen=True)
class TestConfig:
    alpha: float = 0.05
    method: str = "auto"
    num_null: int = 1000
    seed: int = 0
    fix_first: bool = True

    __test__ = False  # keep pytest from collecting this class

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise SpecError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.method not in METHODS:
            raise SpecError(f"method must be one of {METHODS}, got {self.method!r}")
        if int(self.num_null) < 1:
            raise SpecError(f"num_null must be >= 1, got {self.num_null}")
        if not 0 <= int(self.seed) < 2**64:
            raise SpecError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "num_null", int(self.num_null))
        object.__setattr__(self, "seed", int(self.seed))

    def resolve_method(self, panel: TimeSeriesPanel) -> str:
        if self.method == "auto":
            return "shift" if panel.is_single else "permute"
        if self.method == "shift":
            panel.require_single()
        else:
            panel.require_multi()
        return self.method

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class NullDistribution:
    samples: np.ndarray  # ascending
    method: str
    seed: int

    def __post_init__(self):
        samples = np.sort(np.asarray(self.samples, dtype=float))
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        return len(self.samples)


@dataclass(frozen=True)
class TestResult:
    statistic: float
    threshold: float
    p_value: float
    reject: bool
    null: NullDistribution
    config: TestConfig
    method: str
    names: tuple[str, ...]
    bandwidths: tuple[float, ...] | None
    sample_count: int
    small_sample: bool = False

    __test__ = False

    def summary(self) -> dict:
        return {
            "variables": list(self.names),
            "method": self.method,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "p_value": self.p_value,
            "reject": self.reject,
            "sample_count": self.sample_count,
            "small_sample": self.small_sample,
            "bandwidths": None if self.bandwidths is None else list(self.bandwidths),
        }


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def _resampled_columns(d: int, fix_first: bool) -> range:
    return range(1, d) if fix_first else range(d)


def shift_offsets(T: int, d: int, cfg: TestConfig) -> np.ndarray:
    """``(num_null, d)`` rotation offsets; column 0 is zero when ``fix_first``."""
    offsets = np.zeros((cfg.num_null, d), dtype=np.int64)
    for s in range(cfg.num_null):
        for j in _resampled_columns(d, cfg.fix_first):
            offsets[s, j] = _stream(cfg.seed, s, j).integers(1, T)
    return offsets


def permutation_indices(n: int, d: int, cfg: TestConfig, start: int = 0, stop: int | None = None) -> np.ndarray:
    """``(stop - start, d, n)`` realisation orders for null samples ``start..stop-1``."""
    stop = cfg.num_null if stop is None else stop
    index = np.empty((stop - start, d, n), dtype=np.int64)
    index[:] = np.arange(n)
    for s in range(start, stop):
        for j in _resampled_columns(d, cfg.fix_first):
            index[s - start, j] = _stream(cfg.seed, s, j).permutation(n)
    return index


def shift_null_from_grams(grams: GramSet, cfg: TestConfig) -> NullDistribution:
    T = grams.n
    if T < 4:
        raise DegenerateLength(f"shifting needs T >= 4, got T={T}")
    values = grams.shift_statistics(shift_offsets(T, grams.d, cfg))
    return NullDistribution(values, "shift", cfg.seed)


def permutation_null_from_grams(grams: GramSet, cfg: TestConfig) -> NullDistribution:
    values = np.empty(cfg.num_null)
    for start in range(0, cfg.num_null, _BATCH):
        stop = min(start + _BATCH, cfg.num_null)
        values[start:stop] = grams.statistics(permutation_indices(grams.n, grams.d, cfg, start, stop))
    return NullDistribution(values, "permute", cfg.seed)


def shift_null(panel: TimeSeriesPanel, kcfg: KernelConfig, cfg: TestConfig) -> NullDistribution:
    panel.require_variables()
    panel.require_single()
    return shift_null_from_grams(panel_grams(panel, kcfg, single=True), cfg)


def permutation_null(panel: TimeSeriesPanel, kcfg: KernelConfig, cfg: TestConfig) -> NullDistribution:
    panel.require_variables()
    panel.require_multi()
    return permutation_null_from_grams(panel_grams(panel, kcfg, single=False), cfg)


def threshold_rank(num_null: int, alpha: float) -> int:
    """1-based rank ``ceil((1 - alpha) * num_null)``, clamped to ``[1, num_null]``."""
    # round first so 0.95 * 100 does not become rank 96
    rank = math.ceil(round((1.0 - alpha) * num_null, 9))
    return min(max(rank, 1), num_null)


def empirical_threshold(null: NullDistribution, alpha: float) -> float:
    if len(null) == 0:
        raise EmptyNull("null distribution is empty")
    if not 0 < alpha < 1:
        raise SpecError(f"alpha must lie in (0, 1), got {alpha}")
    return float(null.samples[threshold_rank(len(null), alpha) - 1])


def permutation_p_value(null: NullDistribution, statistic: float) -> float:
    """Add-one p-value ``(1 + #{null >= statistic}) / (S + 1)``."""
    if len(null) == 0:
        raise EmptyNull("null distribution is empty")
    exceed = len(null) - np.searchsorted(null.samples, statistic, side="left")
    return (1.0 + exceed) / (len(null) + 1.0)


def test_grams(grams: GramSet, method: str, cfg: TestConfig) -> TestResult:
    """Run the test on precomputed Gram matrices with a resolved method."""
    if method == "shift":
        if grams.n < 4:
            raise DegenerateLength(f"shifting needs T >= 4, got T={grams.n}")
        statistic = float(grams.shift_statistics(np.zeros((1, grams.d), dtype=np.int64))[0])
        null = shift_null_from_grams(grams, cfg)
    elif method == "permute":
        statistic = float(grams.statistics(grams.identity_index())[0])
        null = permutation_null_from_grams(grams, cfg)
    else:
        raise ModeMismatch(f"unresolved method {method!r}")
    threshold = empirical_threshold(null, cfg.alpha)
    return TestResult(
        statistic=statistic,
        threshold=threshold,
        p_value=permutation_p_value(null, statistic),
        reject=bool(statistic > threshold),
        null=null,
        config=cfg,
        method=method,
        names=grams.names,
        bandwidths=grams.bandwidths,
        sample_count=grams.n,
        small_sample=grams.small_sample,
    )


def joint_independence_test(panel: TimeSeriesPanel, kcfg: KernelConfig = KernelConfig(),
                            cfg: TestConfig = TestConfig()) -> TestResult:
    """Test H0: the panel's variables are jointly independent.

    The method is chosen from the panel shape when ``cfg.method == "auto"``.
    """
    panel.require_variables()
    method = cfg.resolve_method(panel)
    grams = panel_grams(panel, kcfg, single=(method == "shift"))
    return test_grams(grams, method, cfg)
