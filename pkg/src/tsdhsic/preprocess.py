"""Series transforms applied to real data before testing.

Differencing and block averaging reduce trends and seasonality; the
Dickey-Fuller check screens the result for a unit root.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SeriesTooShort, SingularRegression, SpecError

# Asymptotic 5% critical value of the Dickey-Fuller t-ratio with a constant
# and no trend (MacKinnon 1991/2010 tables: -2.8621).
ADF_CRITICAL_5PCT = -2.8621


@dataclass(frozen=True)
class AdfReport:
    test_statistic: float
    lag_order: int
    critical_value_5pct: float
    stationary: bool
    nobs: int


def _vector(series) -> np.ndarray:
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise SpecError(f"expected a 1-D series, got shape {x.shape}")
    return x


def difference(series, period: int = 1) -> np.ndarray:
    """``out[t] = x[t + period] - x[t]``."""
    x = _vector(series)
    if period < 1:
        raise SpecError(f"period must be >= 1, got {period}")
    if x.size <= period:
        raise SeriesTooShort(f"length {x.size} does not exceed period {period}")
    return x[period:] - x[:-period]


def block_average(series, block: int) -> np.ndarray:
    """Means of consecutive non-overlapping blocks; a partial tail block is dropped."""
    x = _vector(series)
    if block < 1:
        raise SpecError(f"block must be >= 1, got {block}")
    if x.size < block:
        raise SeriesTooShort(f"length {x.size} is shorter than block {block}")
    m = x.size // block
    return x[: m * block].reshape(m, block).mean(axis=1)


def zscore(series) -> np.ndarray:
    x = _vector(series)
    sd = x.std()
    if sd == 0:
        return x - x.mean()
    return (x - x.mean()) / sd


def adf_test(series, lag_order: int = 0) -> AdfReport:
    """Augmented Dickey-Fuller regression with a constant.

    Regresses ``dy_t`` on ``(1, y_{t-1}, dy_{t-1}, ..., dy_{t-lag})`` by OLS
    and reports the t-ratio of the ``y_{t-1}`` coefficient against the
    asymptotic 5% critical value. No MacKinnon p-value is computed.
    """
    y = _vector(series)
    if lag_order < 0:
        raise SpecError("lag_order must be >= 0")
    if y.size < lag_order + 10:
        raise SeriesTooShort(f"need at least {lag_order + 10} points, got {y.size}")
    dy = np.diff(y)
    target = dy[lag_order:]
    cols = [np.ones(target.size), y[lag_order:-1]]
    for k in range(1, lag_order + 1):
        cols.append(dy[lag_order - k:-k])
    X = np.column_stack(cols)
    if np.linalg.matrix_rank(X) < X.shape[1]:
        raise SingularRegression("ADF design matrix is rank deficient")
    beta, _, _, _ = np.linalg.lstsq(X, target, rcond=None)
    resid = target - X @ beta
    dof = X.shape[0] - X.shape[1]
    if dof <= 0:
        raise SeriesTooShort("no residual degrees of freedom")
    s2 = resid @ resid / dof
    cov = s2 * np.linalg.inv(X.T @ X)
    stat = float(beta[1] / np.sqrt(cov[1, 1]))
    return AdfReport(stat, lag_order, ADF_CRITICAL_5PCT, stat < ADF_CRITICAL_5PCT, int(X.shape[0]))
