"""Compare the numba and numpy quadrature kernels on rank-2 Plancherel grids.

    python benchmarks/bench_kernels.py [--grid 513] [--repeat 3]

Prints one row per (system, kernel) with best-of-N wall time and the max
difference between the two implementations.
"""
import argparse
import time

import numpy as np

from sfab import _kernels
from sfab.parameters import make_params
from sfab.plancherel import Plancherel, t_exponents
from sfab.root_datum import dominant_up_to
from sfab.spherical import macdonald_expand


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=513)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba not importable; nothing to compare")
        return
    systems = [("A", 2, "2", (2, 1)), ("C", 2, "0=2,1=3,2=2", (2, 1)), ("G", 2, "2", (1, 1))]
    print(f"grid {args.grid}^2, threads {_kernels.thread_count()}")
    print(f"{'system':8s} {'kernel':12s} {'numpy s':>9s} {'numba s':>9s} {'speedup':>8s} {'max diff':>10s}")
    for tag, n, q, lam in systems:
        ps = make_params(tag, n, q)
        exps, cs = macdonald_expand(lam, ps=ps).numeric_terms()
        texps = np.array([t_exponents(ps, tuple(e)) for e in exps], dtype=np.int64)
        pl = Plancherel(ps, args.grid, include_boundary=False)
        axes = pl.axes
        _kernels.grid_eval_numba(texps, cs, axes)      # compile outside the timing
        t_np, v_np = best_of(lambda: _kernels.grid_eval_numpy(texps, cs, axes), args.repeat)
        t_nb, v_nb = best_of(lambda: _kernels.grid_eval_numba(texps, cs, axes), args.repeat)
        print(f"{tag}{n:<7d} {'grid_eval':12s} {t_np:9.4f} {t_nb:9.4f} {t_np / t_nb:8.2f} "
              f"{np.abs(v_np - v_nb).max():10.2e}")
        V = np.stack([pl.values(l)[0] for l in dominant_up_to(n, 3)])
        _kernels.weighted_gram_numba(V, pl.w_main)
        t_np, g_np = best_of(lambda: _kernels.weighted_gram_numpy(V, pl.w_main), args.repeat)
        t_nb, g_nb = best_of(lambda: _kernels.weighted_gram_numba(V, pl.w_main), args.repeat)
        print(f"{tag}{n:<7d} {'gram':12s} {t_np:9.4f} {t_nb:9.4f} {t_np / t_nb:8.2f} "
              f"{np.abs(g_np - g_nb).max():10.2e}")


if __name__ == "__main__":
    main()
