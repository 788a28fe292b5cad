#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Runs each hot kernel on a few problem sizes through both dispatch paths,
reports wall times and the worst output disagreement. The numba path is
what CODEMAP_NUMBA=1 (default) selects at import time.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from codemap import _kernels, accel


def bench(label, fn, args, repeat):
    accel.NUMBA_ENABLED = False
    t_np = min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))
    out_np = fn(*args)

    accel.NUMBA_ENABLED = True
    fn(*args)  # warm up / compile
    t_nb = min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))
    out_nb = fn(*args)

    diff = float(np.max(np.abs(np.asarray(out_np) - np.asarray(out_nb))))
    speedup = t_np / t_nb if t_nb > 0 else float("inf")
    print(f"{label:<44} numpy {t_np * 1e3:9.2f} ms   numba {t_nb * 1e3:9.2f} ms   x{speedup:6.1f}   maxdiff {diff:.2e}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if not accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(42)

    for n, res in ((100, 256), (400, 512)):
        xs, ys = rng.random(n), rng.random(n)
        sigmas = 0.005 + 0.03 * rng.random(n)
        bench(f"gaussian_field(n={n}, res={res})", _kernels.gaussian_field, (xs, ys, sigmas, res), args.repeat)

    for n in (150, 400):
        m = rng.random((n, n))
        adj = np.where(m < 0.05, m, np.inf)
        adj = np.minimum(adj, adj.T)
        np.fill_diagonal(adj, 0.0)
        for i in range(n):
            adj[i, (i + 1) % n] = adj[(i + 1) % n, i] = 0.5
        bench(f"all_pairs_shortest_paths(n={n})", _kernels.all_pairs_shortest_paths, (adj,), args.repeat)

    for n in (200, 600):
        delta = rng.random((n, n))
        delta = (delta + delta.T) / 2.0
        np.fill_diagonal(delta, 0.0)
        weights = np.ones((n, n))
        np.fill_diagonal(weights, 0.0)
        pos = rng.random((n, 2))
        bench(f"guttman_pull(n={n})", _kernels.guttman_pull, (delta, weights, pos), args.repeat)
        bench(f"pair_stress(n={n})", _kernels.pair_stress, (delta, weights, pos), args.repeat)


if __name__ == "__main__":
    main()
