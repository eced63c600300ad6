import os
import subprocess
import sys

import numpy as np
import pytest

from sfab import _kernels as K


def _case(seed=0, n=2, terms=12, N=33):
    rng = np.random.default_rng(seed)
    exps = rng.integers(-4, 5, size=(terms, n)).astype(np.int64)
    coeffs = rng.normal(size=terms)      # real, like the spherical coefficients
    axes = [np.exp(2j * np.pi * (np.arange(N) + 0.5) / N)] * n
    return exps, coeffs, axes


def brute(exps, coeffs, axes):
    grids = np.meshgrid(*axes, indexing="ij")
    out = np.zeros(grids[0].shape, dtype=np.complex128)
    for e, c in zip(exps, coeffs):
        term = np.full(out.shape, c, dtype=np.complex128)
        for g, k in zip(grids, e):
            term *= g ** int(k)
        out += term
    return out.reshape(-1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_grid_eval_numpy_matches_brute(n):
    exps, coeffs, axes = _case(n=n, N=9 if n == 3 else 33)
    assert np.allclose(K.grid_eval_numpy(exps, coeffs, axes), brute(exps, coeffs, axes), atol=1e-11)


@pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba missing")
def test_numba_matches_numpy():
    exps, coeffs, axes = _case(seed=3)
    assert np.allclose(K.grid_eval_numba(exps, coeffs, axes), K.grid_eval_numpy(exps, coeffs, axes),
                       atol=1e-12)
    rng = np.random.default_rng(1)
    V = rng.normal(size=(5, 200)) + 1j * rng.normal(size=(5, 200))
    w = rng.uniform(size=200)
    G = K.weighted_gram_numba(V, w)
    assert np.allclose(G, K.weighted_gram_numpy(V, w), atol=1e-12)
    assert np.allclose(G, G.conj().T)


def test_uneven_axes():
    exps, coeffs, _ = _case(seed=4)
    axes = [np.array([-0.5 + 0j]), np.exp(1j * np.linspace(0, 3, 7))]
    assert np.allclose(K.grid_eval(exps, coeffs, axes), brute(exps, coeffs, axes), atol=1e-11)


def test_disable_flag_and_threads():
    code = ("import sfab._kernels as K, numpy as np;"
            "print(K.numba_enabled(), K.thread_count())")
    env = dict(os.environ, SFAB_DISABLE_NUMBA="1", SFAB_THREADS="3")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out == ["False", "3"]
