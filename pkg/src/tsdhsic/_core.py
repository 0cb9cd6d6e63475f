"""Compiled inner loops for the dHSIC V-statistic under re-indexing.

Every null sample (cyclic shift or permutation) is a re-indexing of the
observed Gram matrices: variable ``j`` sees ``K_j[idx_j[a], idx_j[b]]``.
The kernels below evaluate the statistic for a batch of index arrays without
materialising re-indexed matrices. Each sample is reduced by one thread in a
fixed order, so results do not depend on the thread count.

The workqueue threading layer aborts when parallel kernels are launched from
several Python threads at once, so calls made off the main thread go to
serial builds of the same kernels. Those release the GIL, which lets a
thread pool run independent tests concurrently.
"""

import os
import threading
import types

import numba
import numpy as np

# the bundled TBB is too old for numba; workqueue is always available
if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER = "workqueue"


@numba.njit(cache=True, inline="always")
def _kahan_add(total, comp, value):
    y = value - comp
    t = total + y
    comp = (t - total) - y
    return t, comp


def _reindexed_terms(grams, row_means, index):
    """Joint-product sum and marginal-product term for each index set.

    Parameters
    ----------
    grams : (d, n, n) float64, symmetric
    row_means : (d, n) float64
    index : (S, d, n) int64

    Returns
    -------
    joint : (S,) sum over all ordered pairs (a, b) of prod_j K_j[i_j(a), i_j(b)]
    cross : (S,) sum over a of prod_j row_means[j, i_j(a)]
    """
    S, d, n = index.shape
    joint = np.empty(S)
    cross = np.empty(S)
    for s in numba.prange(S):
        buf = np.empty(n)
        total = 0.0
        comp = 0.0
        ctot = 0.0
        ccomp = 0.0
        for a in range(n):
            ia = index[s, 0, a]
            g0 = grams[0, ia]
            for b in range(a, n):
                buf[b] = g0[index[s, 0, b]]
            rm = row_means[0, ia]
            for j in range(1, d):
                ja = index[s, j, a]
                gj = grams[j, ja]
                for b in range(a, n):
                    buf[b] *= gj[index[s, j, b]]
                rm *= row_means[j, ja]
            row = 0.5 * buf[a]
            for b in range(a + 1, n):
                row += buf[b]
            total, comp = _kahan_add(total, comp, row)
            ctot, ccomp = _kahan_add(ctot, ccomp, rm)
        joint[s] = 2.0 * total
        cross[s] = ctot
    return joint, cross


@numba.njit(cache=True)
def compensated_sum(values):
    total = 0.0
    comp = 0.0
    for v in values.ravel():
        total, comp = _kahan_add(total, comp, v)
    return total


def set_threads(threads):
    """Cap the numba worker pool; ``None`` leaves the default."""
    if threads is not None:
        numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))


@numba.njit(cache=True, fastmath=True)
def _dot2(x, y):
    acc = 0.0
    for a in range(x.shape[0]):
        acc += x[a] * y[a]
    return acc


@numba.njit(cache=True, fastmath=True)
def _dot3(x, y, z):
    acc = 0.0
    for a in range(x.shape[0]):
        acc += x[a] * y[a] * z[a]
    return acc


@numba.njit(cache=True, fastmath=True)
def _mul_into(buf, x):
    for a in range(buf.shape[0]):
        buf[a] *= x[a]


@numba.njit(cache=True, fastmath=True)
def _sum(x):
    acc = 0.0
    for a in range(x.shape[0]):
        acc += x[a]
    return acc


def diagonal_form(grams):
    """Doubled diagonal layout for cyclic-shift evaluation.

    ``out[j, k, a] = K_j[a mod T, (a + k) mod T]`` for ``k = 0..T//2`` and
    ``a = 0..2T-1``. A common cyclic shift ``c`` of both indices of ``K_j``
    turns into the contiguous slice ``out[j, k, c:c+T]``.
    """
    d, T, _ = grams.shape
    half = T // 2
    a = np.arange(2 * T) % T
    k = np.arange(half + 1)
    return np.ascontiguousarray(grams[:, a[None, :], (a[None, :] + k[:, None]) % T])


def _shifted_terms(diag, row_means, offsets):
    """Same contract as :func:`_reindexed_terms` for pure cyclic shifts.

    Parameters
    ----------
    diag : (d, T//2 + 1, 2T) from :func:`diagonal_form`
    row_means : (d, 2T) row means, tiled twice
    offsets : (S, d) int64 shifts in ``[0, T)``

    Uses the symmetry of each Gram matrix: diagonal ``k`` and ``T - k`` hold
    the same values, so only ``k <= T//2`` is visited.
    """
    S, d = offsets.shape
    T = diag.shape[2] // 2
    half = diag.shape[1] - 1
    joint = np.empty(S)
    cross = np.empty(S)
    for s in numba.prange(S):
        buf = np.empty(T)
        total = 0.0
        comp = 0.0
        for k in range(half + 1):
            c0 = offsets[s, 0]
            if d == 2:
                c1 = offsets[s, 1]
                acc = _dot2(diag[0, k, c0:c0 + T], diag[1, k, c1:c1 + T])
            elif d == 3:
                c1 = offsets[s, 1]
                c2 = offsets[s, 2]
                acc = _dot3(diag[0, k, c0:c0 + T], diag[1, k, c1:c1 + T], diag[2, k, c2:c2 + T])
            else:
                buf[:] = diag[0, k, c0:c0 + T]
                for j in range(1, d):
                    cj = offsets[s, j]
                    _mul_into(buf, diag[j, k, cj:cj + T])
                acc = _sum(buf)
            if k == 0 or 2 * k == T:
                total, comp = _kahan_add(total, comp, acc)
            else:
                total, comp = _kahan_add(total, comp, 2.0 * acc)
        joint[s] = total
        ctot = 0.0
        ccomp = 0.0
        for a in range(T):
            p = 1.0
            for j in range(d):
                p *= row_means[j, a + offsets[s, j]]
            ctot, ccomp = _kahan_add(ctot, ccomp, p)
        cross[s] = ctot
    return joint, cross


_parallel = {
    "reindexed": numba.njit(cache=True, parallel=True, nogil=True)(_reindexed_terms),
    "shifted": numba.njit(cache=True, parallel=True, nogil=True)(_shifted_terms),
}


def _renamed(func, name):
    # the on-disk cache is keyed by qualified name, not by the parallel flag
    clone = types.FunctionType(func.__code__, func.__globals__, name, func.__defaults__, func.__closure__)
    clone.__qualname__ = name
    return clone


_serial = {
    "reindexed": numba.njit(cache=True, nogil=True)(_renamed(_reindexed_terms, "_reindexed_terms_serial")),
    "shifted": numba.njit(cache=True, nogil=True)(_renamed(_shifted_terms, "_shifted_terms_serial")),
}


def _kernels():
    return _parallel if threading.current_thread() is threading.main_thread() else _serial


def reindexed_terms(grams, row_means, index):
    return _kernels()["reindexed"](grams, row_means, index)


def shifted_terms(diag, row_means, offsets):
    return _kernels()["shifted"](diag, row_means, offsets)
