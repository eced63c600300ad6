"""Hot numeric kernels with numba and pure-numpy implementations.

Set SFAB_DISABLE_NUMBA=1 to force the numpy versions.  SFAB_THREADS bounds
the number of numba worker threads.  The variants agree to rounding.  The
grid evaluation is a matrix product after factorising the first axis, so its
default is the BLAS-backed numpy path (see benchmarks/bench_kernels.py); the
numba loop is kept as an explicit alternative.
"""
from __future__ import annotations

import functools
import os

import numpy as np

try:
    import numba as nb
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the bundled TBB is too old on some systems; avoid the probe warning
        nb.config.THREADING_LAYER = "workqueue"
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    nb = None
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get("SFAB_DISABLE_NUMBA", "0") in ("", "0")


def thread_count() -> int:
    raw = os.environ.get("SFAB_THREADS", "")
    try:
        k = int(raw)
    except ValueError:
        k = os.cpu_count() or 1
    return max(1, k)


def _apply_threads() -> None:
    if HAVE_NUMBA:
        nb.set_num_threads(min(thread_count(), nb.config.NUMBA_NUM_THREADS))


# ---------------------------------------------------------------------------
# power tables
# ---------------------------------------------------------------------------

def power_tables(axes, exps: np.ndarray):
    """pow[d, e - emin[d], j] = axes[d][j] ** e, padded to a common length."""
    n = len(axes)
    lens = np.array([len(a) for a in axes], dtype=np.int64)
    width = int(lens.max())
    emin = exps.min(axis=0) if len(exps) else np.zeros(n, dtype=np.int64)
    emax = exps.max(axis=0) if len(exps) else np.zeros(n, dtype=np.int64)
    span = int((emax - emin).max()) + 1 if len(exps) else 1
    tab = np.zeros((n, span, width), dtype=np.complex128)
    for d, a in enumerate(axes):
        a = np.asarray(a, dtype=np.complex128)
        for k in range(span):
            tab[d, k, : len(a)] = a ** int(emin[d] + k)
    return tab, emin.astype(np.int64), lens


# ---------------------------------------------------------------------------
# Laurent polynomial on a tensor grid
# ---------------------------------------------------------------------------

def grid_eval_numpy(exps: np.ndarray, coeffs: np.ndarray, axes) -> np.ndarray:
    """sum_k coeffs[k] prod_d axes[d] ** exps[k, d] on the tensor grid, flattened C-order."""
    tab, emin, lens = power_tables(axes, exps)
    n = len(axes)
    idx = exps - emin
    if n == 1:
        A = tab[0, idx[:, 0], : lens[0]]
        return coeffs.astype(np.complex128) @ A
    # leading factor times the product of the trailing ones: A.T @ R
    A = tab[0, idx[:, 0], : lens[0]] * coeffs[:, None]
    R = tab[1, idx[:, 1], : lens[1]]
    for d in range(2, n):
        R = (R[:, :, None] * tab[d, idx[:, d], : lens[d]][:, None, :]).reshape(len(exps), -1)
    return (A.T @ R).reshape(-1)


def _grid_eval_nb_impl(tab, emin, lens, exps, coeffs):
    # out[i, rest] = sum_k (c_k pow_0[k, i]) * prod_{d>0} pow_d[k, i_d]
    n = lens.shape[0]
    K = exps.shape[0]
    inner = 1
    for d in range(1, n):
        inner *= lens[d]
    R = np.ones((K, inner), dtype=np.complex128)
    for k in nb.prange(K):
        for r in range(inner):
            rem = r
            v = 1.0 + 0j
            for d in range(n - 1, 0, -1):
                v *= tab[d, exps[k, d] - emin[d], rem % lens[d]]
                rem //= lens[d]
            R[k, r] = v
    out = np.zeros(lens[0] * inner, dtype=np.complex128)
    for i in nb.prange(lens[0]):
        base = i * inner
        for k in range(K):
            a = coeffs[k] * tab[0, exps[k, 0] - emin[0], i]
            for r in range(inner):
                out[base + r] += a * R[k, r]
    return out


def _weighted_gram_nb_impl(V, w):
    # Hermitian: fill the upper triangle and mirror it
    L, M = V.shape
    G = np.zeros((L, L), dtype=np.complex128)
    npairs = L * (L + 1) // 2
    for p in nb.prange(npairs):
        a = 0
        rem = p * 1
        while rem >= L - a:
            rem -= L - a
            a += 1
        b = a + rem
        acc = 0j
        for m in range(M):
            acc += V[a, m] * np.conj(V[b, m]) * w[m]
        G[a, b] = acc
        G[b, a] = np.conj(acc)
    return G


if HAVE_NUMBA:
    _jit = functools.partial(nb.njit, cache=False, nogil=True, parallel=True)
    _grid_eval_nb = _jit(_grid_eval_nb_impl)
    _weighted_gram_nb = _jit(_weighted_gram_nb_impl)


def grid_eval_numba(exps: np.ndarray, coeffs: np.ndarray, axes) -> np.ndarray:
    _apply_threads()
    tab, emin, lens = power_tables(axes, exps)
    return _grid_eval_nb(tab, emin, lens, np.ascontiguousarray(exps, dtype=np.int64),
                         np.ascontiguousarray(coeffs, dtype=np.float64))


def grid_eval(exps: np.ndarray, coeffs: np.ndarray, axes, prefer: str = "numpy") -> np.ndarray:
    exps = np.asarray(exps, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if prefer == "numba" and numba_enabled():
        return grid_eval_numba(exps, coeffs, axes)
    return grid_eval_numpy(exps, coeffs, axes)


def weighted_gram_numpy(V: np.ndarray, w: np.ndarray) -> np.ndarray:
    """G[a, b] = sum_m V[a, m] conj(V[b, m]) w[m]."""
    return (V * w) @ V.conj().T


def weighted_gram_numba(V: np.ndarray, w: np.ndarray) -> np.ndarray:
    _apply_threads()
    return _weighted_gram_nb(np.ascontiguousarray(V, dtype=np.complex128),
                             np.ascontiguousarray(np.real(w), dtype=np.float64))


def weighted_gram(V: np.ndarray, w: np.ndarray) -> np.ndarray:
    if numba_enabled():
        return weighted_gram_numba(V, w)
    return weighted_gram_numpy(V, w)
