"""Hot numeric kernels, each with a numba-compiled and a pure-numpy variant.

Three loops dominate a map build: summing per-file Gaussians over the
elevation grid (cells x files), the all-pairs shortest paths behind the
geodesic distances (n^3), and the majorization pull inside every stress
iteration (n^2 per iteration). Everything else in the package is cheap
enough for plain numpy.

The numba variants are written as sequential loops on purpose: reductions
run in a fixed order, so a given input always produces the same bits.
The Floyd-Warshall recurrence is written identically in both variants
(row and column k are invariant during sweep k), so the two paths agree
exactly there; the other kernels agree to rounding noise.
"""

from __future__ import annotations

import numpy as np

from . import accel

if accel.HAVE_NUMBA:
    from numba import njit
else:  # pragma: no cover - stripped installs only
    def njit(*args, **kwargs):
        def deco(fn):
            return fn

        return deco if not (args and callable(args[0])) else args[0]


# ---------------------------------------------------------------------------
# Gaussian elevation field
# ---------------------------------------------------------------------------


def _gaussian_field_np(xs, ys, sigmas, res):
    centers = (np.arange(res, dtype=np.float64) + 0.5) / res
    cx = centers[np.newaxis, :]  # columns: x
    cy = centers[:, np.newaxis]  # rows: y (row 0 = south edge)
    grid = np.zeros((res, res), dtype=np.float64)
    for i in range(xs.shape[0]):
        d2 = (cx - xs[i]) ** 2 + (cy - ys[i]) ** 2
        grid += np.exp(-d2 / (2.0 * sigmas[i] * sigmas[i]))
    return grid


@njit(cache=True)
def _gaussian_field_nb(xs, ys, sigmas, res):  # pragma: no cover - measured via dispatch
    grid = np.zeros((res, res), dtype=np.float64)
    inv = np.empty(xs.shape[0], dtype=np.float64)
    for i in range(xs.shape[0]):
        inv[i] = 1.0 / (2.0 * sigmas[i] * sigmas[i])
    for r in range(res):
        cy = (r + 0.5) / res
        for c in range(res):
            cx = (c + 0.5) / res
            acc = 0.0
            for i in range(xs.shape[0]):
                dx = cx - xs[i]
                dy = cy - ys[i]
                acc += np.exp(-(dx * dx + dy * dy) * inv[i])
            grid[r, c] = acc
    return grid


def gaussian_field(xs: np.ndarray, ys: np.ndarray, sigmas: np.ndarray, res: int) -> np.ndarray:
    """Sum of unit-amplitude Gaussians sampled at cell centers of a res x res grid.

    Row r spans y in [r/res, (r+1)/res] with row 0 at the bottom; heights are
    unnormalized (callers rescale).
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    sigmas = np.ascontiguousarray(sigmas, dtype=np.float64)
    if accel.use_numba():
        return _gaussian_field_nb(xs, ys, sigmas, res)
    return _gaussian_field_np(xs, ys, sigmas, res)


# ---------------------------------------------------------------------------
# All-pairs shortest paths (Floyd-Warshall)
# ---------------------------------------------------------------------------


def _floyd_warshall_np(dist):
    n = dist.shape[0]
    for k in range(n):
        np.minimum(dist, dist[:, k : k + 1] + dist[k : k + 1, :], out=dist)
    return dist


@njit(cache=True)
def _floyd_warshall_nb(dist):  # pragma: no cover - measured via dispatch
    n = dist.shape[0]
    for k in range(n):
        for i in range(n):
            dik = dist[i, k]
            for j in range(n):
                alt = dik + dist[k, j]
                if alt < dist[i, j]:
                    dist[i, j] = alt
    return dist


def all_pairs_shortest_paths(adjacency: np.ndarray) -> np.ndarray:
    """APSP over a dense adjacency matrix (np.inf = no edge, diagonal 0)."""
    dist = np.array(adjacency, dtype=np.float64, copy=True, order="C")
    if accel.use_numba():
        return _floyd_warshall_nb(dist)
    return _floyd_warshall_np(dist)


# ---------------------------------------------------------------------------
# SMACOF majorization step and stress
# ---------------------------------------------------------------------------


def _guttman_pull_np(delta, weights, pos):
    diff = pos[:, np.newaxis, :] - pos[np.newaxis, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(dist > 0.0, weights * delta / dist, 0.0)
    np.fill_diagonal(ratio, 0.0)
    return ratio.sum(axis=1)[:, np.newaxis] * pos - ratio @ pos


@njit(cache=True)
def _guttman_pull_nb(delta, weights, pos):  # pragma: no cover - measured via dispatch
    n = pos.shape[0]
    out = np.zeros((n, 2), dtype=np.float64)
    for i in range(n):
        ax = 0.0
        ay = 0.0
        for j in range(n):
            if j == i:
                continue
            dx = pos[i, 0] - pos[j, 0]
            dy = pos[i, 1] - pos[j, 1]
            d = np.sqrt(dx * dx + dy * dy)
            if d > 0.0:
                r = weights[i, j] * delta[i, j] / d
                ax += r * dx
                ay += r * dy
        out[i, 0] = ax
        out[i, 1] = ay
    return out


def guttman_pull(delta: np.ndarray, weights: np.ndarray, pos: np.ndarray) -> np.ndarray:
    """B(Z) Z of the Guttman transform: row i is sum_j w_ij d_ij / |z_i - z_j| (z_i - z_j).

    Coincident pairs contribute zero (the ratio is taken as 0 when the
    embedded distance vanishes).
    """
    if accel.use_numba():
        return _guttman_pull_nb(delta, weights, pos)
    return _guttman_pull_np(delta, weights, pos)


def _pair_stress_np(delta, weights, pos):
    diff = pos[:, np.newaxis, :] - pos[np.newaxis, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    err = dist - delta
    s = weights * err * err
    return float(np.sum(np.triu(s, 1)))


@njit(cache=True)
def _pair_stress_nb(delta, weights, pos):  # pragma: no cover - measured via dispatch
    n = pos.shape[0]
    acc = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            dx = pos[i, 0] - pos[j, 0]
            dy = pos[i, 1] - pos[j, 1]
            err = np.sqrt(dx * dx + dy * dy) - delta[i, j]
            acc += weights[i, j] * err * err
    return acc


def pair_stress(delta: np.ndarray, weights: np.ndarray, pos: np.ndarray) -> float:
    """Weighted raw stress sum_{i<j} w_ij (|x_i - x_j| - delta_ij)^2."""
    if accel.use_numba():
        return float(_pair_stress_nb(delta, weights, pos))
    return _pair_stress_np(delta, weights, pos)
