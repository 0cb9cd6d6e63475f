"""Gaussian kernel, median-heuristic bandwidth and Gram matrices.

The kernel is ``k(x, y) = exp(-||x - y||^2 / (2 sigma^2))``. With the median
heuristic, ``sigma = median_factor * m`` where ``m`` is the median Euclidean
distance over distinct sample pairs, ignoring pairs at distance zero so
repeated values (boolean series, constant stretches) cannot collapse the
bandwidth. The default factor ``1/sqrt(2)`` gives
``k(x, y) = exp(-||x - y||^2 / m^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import math

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import AllSamplesIdentical, DimensionMismatch, EmptyInput, SpecError

MEDIAN = "median"
DEFAULT_MEDIAN_FACTOR = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class KernelConfig:
    """Kernel family and bandwidth rule.

    ``bandwidth`` is either ``"median"`` or a fixed positive ``sigma``;
    ``median_factor`` scales the median distance into ``sigma``.
    """

    family: str = "gaussian"
    bandwidth: Union[str, float] = MEDIAN
    median_factor: float = DEFAULT_MEDIAN_FACTOR

    def __post_init__(self):
        if self.family != "gaussian":
            raise SpecError(f"unsupported kernel family {self.family!r}")
        if isinstance(self.bandwidth, str):
            if self.bandwidth != MEDIAN:
                raise SpecError(f"bandwidth must be 'median' or a positive number, got {self.bandwidth!r}")
        else:
            sigma = float(self.bandwidth)
            if not np.isfinite(sigma) or sigma <= 0:
                raise SpecError(f"fixed bandwidth must be > 0, got {self.bandwidth}")
            object.__setattr__(self, "bandwidth", sigma)
        if not self.median_factor > 0:
            raise SpecError(f"median_factor must be > 0, got {self.median_factor}")

    @property
    def is_median(self) -> bool:
        return isinstance(self.bandwidth, str)


def as_samples(samples) -> np.ndarray:
    """Coerce a sequence of scalars or vectors to a 2-D ``(m, p)`` float array."""
    try:
        x = np.asarray(samples, dtype=float)
    except ValueError as exc:
        raise DimensionMismatch("samples have unequal dimensions") from exc
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise DimensionMismatch(f"samples must be scalars or vectors, got shape {x.shape}")
    return x


def median_heuristic_bandwidth(samples) -> float:
    """Median Euclidean distance over distinct pairs at nonzero distance."""
    x = as_samples(samples)
    if x.shape[0] < 2:
        raise EmptyInput("median heuristic needs at least two samples")
    dist = pdist(x, "euclidean")
    dist = dist[dist > 0]
    if dist.size == 0:
        raise AllSamplesIdentical("all pairwise distances are zero")
    return float(np.median(dist))


def resolve_bandwidth(samples, config: KernelConfig) -> float:
    if config.is_median:
        return config.median_factor * median_heuristic_bandwidth(samples)
    return float(config.bandwidth)


def gaussian_gram(samples, sigma: float) -> np.ndarray:
    """Gram matrix of ``samples`` for a fixed bandwidth ``sigma``."""
    x = as_samples(samples)
    if x.shape[1] == 1:
        diff = np.subtract.outer(x[:, 0], x[:, 0])
        sq = diff * diff
    else:
        sq = squareform(pdist(x, "sqeuclidean"))
    gram = np.exp(sq * (-0.5 / (sigma * sigma)))
    np.fill_diagonal(gram, 1.0)
    return gram


def gram_matrix(samples, config: KernelConfig = KernelConfig()) -> np.ndarray:
    """Gaussian Gram matrix of ``samples``, resolving the bandwidth from ``config``.

    Raises
    ------
    DimensionMismatch
        If the samples do not share one dimension.
    AllSamplesIdentical
        If the median heuristic is requested on data with no spread.
    """
    x = as_samples(samples)
    return gaussian_gram(x, resolve_bandwidth(x, config))


def panel_samples(data: np.ndarray, single: bool) -> np.ndarray:
    """Kernel samples for one variable of a panel.

    In single-realisation mode every time point is a scalar sample; otherwise
    each realisation (a whole series) is one vector sample.
    """
    if single:
        return data[0][:, None]
    return data


def variable_gram(data: np.ndarray, single: bool, config: KernelConfig) -> tuple[np.ndarray, float]:
    """Gram matrix and resolved bandwidth for one panel variable.

    A variable with no spread at all (constant in time, or identical
    realisations) has an all-ones Gram matrix whatever the bandwidth, so the
    median heuristic falls back to ``sigma = 1`` instead of failing.
    """
    x = panel_samples(data, single)
    try:
        sigma = resolve_bandwidth(x, config)
    except AllSamplesIdentical:
        sigma = 1.0
    return gaussian_gram(x, sigma), sigma
