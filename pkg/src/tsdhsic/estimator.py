"""dHSIC V-statistic from d Gram matrices.

For Gram matrices ``K_1..K_d`` over ``n`` samples the statistic is::

    mean_{a,b} prod_j K_j[a,b]
      + prod_j mean(K_j)
      - 2 mean_a prod_j mean_b K_j[a,b]

which is the literal V-statistic over the index sets ``{1..n}^2``,
``{1..n}^{2d}`` and ``{1..n}^{d+1}`` collapsed to O(d n^2) work.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _core
from .errors import InstanceTooLarge, SizeMismatch, TooFewSamples, TooFewVariables
from .kernel import KernelConfig, variable_gram
from .panel import TimeSeriesPanel

NAIVE_LIMIT = 10**7


@dataclass(frozen=True)
class DhsicStatistic:
    value: float
    d: int
    sample_count: int
    # set when n < 2d, below the sample size the asymptotic theory needs
    small_sample: bool = False

    def __float__(self):
        return self.value


def _stack(grams: Sequence[np.ndarray]) -> np.ndarray:
    grams = [np.asarray(g, dtype=float) for g in grams]
    if len(grams) < 2:
        raise TooFewVariables(f"dHSIC needs d >= 2 Gram matrices, got {len(grams)}")
    n = grams[0].shape[0]
    for g in grams:
        if g.ndim != 2 or g.shape != (n, n):
            raise SizeMismatch(f"Gram shapes differ: {[x.shape for x in grams]}")
    if n < 2:
        raise TooFewSamples(f"dHSIC needs n >= 2 samples, got {n}")
    return np.ascontiguousarray(np.stack(grams))


class GramSet:
    """Precomputed Gram matrices with the marginal summaries the statistic needs.

    The grand means (and so the middle term) are unchanged by any re-indexing,
    and row means are re-indexed along with the matrices, so evaluating a null
    sample costs one pass over the joint product only.
    """

    def __init__(self, grams: Sequence[np.ndarray], names: Sequence[str] | None = None,
                 bandwidths: Sequence[float] | None = None):
        stacked = _stack(grams)
        if not np.allclose(stacked, stacked.transpose(0, 2, 1), rtol=0, atol=1e-12):
            raise SizeMismatch("Gram matrices must be symmetric")
        self.grams = stacked
        self.d, self.n = stacked.shape[0], stacked.shape[1]
        self.names = tuple(names) if names is not None else tuple(str(j) for j in range(self.d))
        self.bandwidths = tuple(bandwidths) if bandwidths is not None else None
        self.row_means = np.ascontiguousarray(stacked.mean(axis=2))
        self.grand_means = np.array([_core.compensated_sum(g) / (self.n * self.n) for g in stacked])
        self.marginal_term = float(np.prod(self.grand_means))
        self._diag = None
        self._tiled_row_means = None

    @property
    def small_sample(self) -> bool:
        return self.n < 2 * self.d

    def subset(self, positions: Sequence[int]) -> GramSet:
        positions = list(positions)
        bw = None if self.bandwidths is None else [self.bandwidths[p] for p in positions]
        return GramSet(self.grams[positions], [self.names[p] for p in positions], bw)

    def identity_index(self) -> np.ndarray:
        return np.broadcast_to(np.arange(self.n, dtype=np.int64), (1, self.d, self.n)).copy()

    def shift_statistics(self, offsets: np.ndarray) -> np.ndarray:
        """Statistic when variable ``j`` is cyclically rotated by ``offsets[s, j]``.

        Requires ``n`` to be a time axis (single-realisation Grams).
        """
        if self._diag is None:
            self._diag = _core.diagonal_form(self.grams)
            self._tiled_row_means = np.ascontiguousarray(np.concatenate([self.row_means] * 2, axis=1))
        offsets = np.ascontiguousarray(offsets, dtype=np.int64) % self.n
        joint, cross = _core.shifted_terms(self._diag, self._tiled_row_means, offsets)
        n = self.n
        return joint / (n * n) + self.marginal_term - 2.0 * cross / n

    def statistics(self, index: np.ndarray) -> np.ndarray:
        """Statistic for each ``(d, n)`` index set in the ``(S, d, n)`` batch."""
        index = np.ascontiguousarray(index, dtype=np.int64)
        joint, cross = _core.reindexed_terms(self.grams, self.row_means, index)
        n = self.n
        return joint / (n * n) + self.marginal_term - 2.0 * cross / n

    def statistic(self) -> DhsicStatistic:
        value = float(self.statistics(self.identity_index())[0])
        return DhsicStatistic(value, self.d, self.n, self.small_sample)


def dhsic_from_grams(grams: Sequence[np.ndarray]) -> DhsicStatistic:
    """dHSIC V-statistic of d equally sized symmetric Gram matrices.

    Raises
    ------
    TooFewVariables
        Fewer than two matrices.
    SizeMismatch
        Matrices of different size, or not symmetric.
    TooFewSamples
        ``n < 2``. For ``2 <= n < 2d`` the value is still returned with
        ``small_sample`` set.
    """
    return GramSet(grams).statistic()


def dhsic_naive(grams: Sequence[np.ndarray]) -> DhsicStatistic:
    """Literal enumeration of the three V-statistic sums. Test oracle only."""
    K = _stack(grams)
    d, n = K.shape[0], K.shape[1]
    if n ** (2 * d) > NAIVE_LIMIT:
        raise InstanceTooLarge(f"n^(2d) = {n ** (2 * d)} exceeds {NAIVE_LIMIT}")
    idx = range(n)
    first = math.fsum(
        math.prod(K[j, t[0], t[1]] for j in range(d)) for t in itertools.product(idx, repeat=2)
    ) / n**2
    second = math.fsum(
        math.prod(K[j, t[2 * j], t[2 * j + 1]] for j in range(d))
        for t in itertools.product(idx, repeat=2 * d)
    ) / n ** (2 * d)
    third = math.fsum(
        math.prod(K[j, t[0], t[j + 1]] for j in range(d))
        for t in itertools.product(idx, repeat=d + 1)
    ) / n ** (d + 1)
    return DhsicStatistic(first + second - 2.0 * third, d, n, n < 2 * d)


def panel_grams(panel: TimeSeriesPanel, kcfg: KernelConfig, single: bool) -> GramSet:
    """One Gram matrix per variable; bandwidths resolved on the observed data."""
    grams, bws = [], []
    for x in panel.data:
        g, sigma = variable_gram(x, single, kcfg)
        grams.append(g)
        bws.append(sigma)
    return GramSet(grams, panel.names, bws)


def dhsic_single_realisation(panel: TimeSeriesPanel, kcfg: KernelConfig = KernelConfig()) -> DhsicStatistic:
    """Statistic over the T time points of one realisation (scalar samples)."""
    panel.require_variables()
    T = panel.require_single()
    if T < 2:
        raise TooFewSamples("single-realisation mode needs T >= 2")
    return panel_grams(panel, kcfg, single=True).statistic()


def dhsic_multi_realisation(panel: TimeSeriesPanel, kcfg: KernelConfig = KernelConfig()) -> DhsicStatistic:
    """Statistic over n realisations, each whole series one vector sample."""
    panel.require_variables()
    panel.require_multi()
    return panel_grams(panel, kcfg, single=False).statistic()
