"""2-D layout: k-NN geodesics, classical MDS seeding, SMACOF refinement, anchors.

The full chain for a fresh layout is: neighbor graph on the dissimilarities,
geodesic distances over it, classical MDS of the geodesics as the starting
configuration, then SMACOF against the original (non-geodesic)
dissimilarities. Warm re-layouts skip the seeding and run SMACOF from the
previous positions with the surviving files softly anchored there.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .metrics import DissimilarityMatrix

DEFAULT_MAX_ITER = 300
DEFAULT_EPS_REL = 1e-6
DEFAULT_SOFT_WEIGHT = 10.0
DEFAULT_MARGIN = 0.05


@dataclass(frozen=True)
class Layout:
    """Per-file 2-D positions plus the stress values recorded while solving.

    Positions are only guaranteed to lie in the unit square after
    normalize_layout; the raw MDS/SMACOF stages work at dissimilarity scale.
    """

    positions: np.ndarray  # (n, 2) float64
    stress_trace: tuple[float, ...] = ()
    seed: int = 0

    def __post_init__(self):
        pos = np.array(self.positions, dtype=np.float64, copy=True, order="C")
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise ValueError("positions must have shape (n, 2)")
        pos.flags.writeable = False
        object.__setattr__(self, "positions", pos)


@dataclass(frozen=True)
class AnchorSet:
    """Files pinned (hard) or pulled (soft) toward fixed unit-square positions."""

    entries: dict[int, tuple[float, float]]
    mode: str = "hard"  # "hard" | "soft"
    soft_weight: float = DEFAULT_SOFT_WEIGHT

    def __post_init__(self):
        if self.mode not in ("hard", "soft"):
            raise ValueError("anchor mode must be 'hard' or 'soft'")
        if self.soft_weight <= 0.0:
            raise ValueError("soft_weight must be positive")
        for idx, (x, y) in self.entries.items():
            if idx < 0:
                raise ValueError(f"anchor index {idx} out of range")
            if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
                raise ValueError(f"anchor position {(x, y)} outside the unit square")


@dataclass(frozen=True)
class NeighborGraph:
    n: int
    edges: tuple[tuple[int, int, float], ...]  # (i, j, weight) with i < j
    labels: tuple[str, ...] = ()

    def adjacency(self) -> np.ndarray:
        adj = np.full((self.n, self.n), np.inf, dtype=np.float64)
        np.fill_diagonal(adj, 0.0)
        for i, j, w in self.edges:
            adj[i, j] = w
            adj[j, i] = w
        return adj


def knn_graph(d: DissimilarityMatrix, k: int) -> NeighborGraph:
    """Symmetrized k-nearest-neighbor graph, patched to a single component.

    Ties are broken toward the lower index. If the union graph is
    disconnected, the globally shortest edge between two components is added
    repeatedly until one component remains.
    """
    n = d.n
    if n < 2:
        raise ValueError("need at least two points for a neighbor graph")
    if k <= 0 or k >= n:
        raise ValueError(f"k must satisfy 0 < k < n, got k={k}, n={n}")

    values = d.values
    edges: set[tuple[int, int]] = set()
    for i in range(n):
        order = np.argsort(values[i], kind="stable")  # stable: ties -> lower index
        picked = 0
        for j in order:
            j = int(j)
            if j == i:
                continue
            edges.add((min(i, j), max(i, j)))
            picked += 1
            if picked == k:
                break

    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in edges:
        parent[find(i)] = find(j)

    while True:
        roots = {find(i) for i in range(n)}
        if len(roots) <= 1:
            break
        best: tuple[float, int, int] | None = None
        for i in range(n):
            for j in range(i + 1, n):
                if find(i) != find(j):
                    cand = (float(values[i, j]), i, j)
                    if best is None or cand < best:
                        best = cand
        assert best is not None
        _, i, j = best
        edges.add((i, j))
        parent[find(i)] = find(j)

    edge_list = tuple((i, j, float(values[i, j])) for i, j in sorted(edges))
    return NeighborGraph(n=n, edges=edge_list, labels=d.labels)


def geodesic_distances(g: NeighborGraph) -> DissimilarityMatrix:
    """All-pairs shortest path sums over the neighbor graph (entries may exceed 1)."""
    dist = _kernels.all_pairs_shortest_paths(g.adjacency())
    if np.any(np.isinf(dist)):
        raise ValueError("neighbor graph is disconnected")
    labels = g.labels if g.labels else tuple(str(i) for i in range(g.n))
    return DissimilarityMatrix(values=dist, labels=labels)


def classical_mds(values: np.ndarray) -> np.ndarray:
    """Torgerson double-centering embedding into the plane.

    Returns the top-2 eigenvectors of -1/2 J D^2 J scaled by the square roots
    of their (clamped non-negative) eigenvalues. Sign convention: the
    largest-magnitude component of each axis is made positive, so the output
    is deterministic.
    """
    n = values.shape[0]
    if n < 2:
        raise ValueError("need at least two points")
    d2 = values.astype(np.float64) ** 2
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ d2 @ j
    b = (b + b.T) / 2.0
    evals, evecs = np.linalg.eigh(b)
    pos = np.zeros((n, 2), dtype=np.float64)
    for axis in range(2):
        lam = evals[-1 - axis]
        vec = evecs[:, -1 - axis]
        if lam <= 0.0:
            continue
        comp = vec * np.sqrt(lam)
        if comp[int(np.argmax(np.abs(comp)))] < 0.0:
            comp = -comp
        pos[:, axis] = comp
    return pos


def _augmented_problem(d: DissimilarityMatrix, init: np.ndarray, anchors: AnchorSet | None):
    """Build (delta, weights, positions, fixed mask) including soft-anchor pseudo-points."""
    n = d.n
    if anchors is not None:
        for idx in anchors.entries:
            if idx >= n:
                raise ValueError(f"anchor index {idx} out of range for n={n}")

    if anchors is not None and anchors.mode == "soft" and anchors.entries:
        anchored = sorted(anchors.entries)
        m = len(anchored)
        total = n + m
        delta = np.zeros((total, total), dtype=np.float64)
        delta[:n, :n] = d.values
        weights = np.zeros((total, total), dtype=np.float64)
        weights[:n, :n] = 1.0
        np.fill_diagonal(weights, 0.0)
        pos = np.zeros((total, 2), dtype=np.float64)
        pos[:n] = init
        fixed = np.zeros(total, dtype=bool)
        for t, idx in enumerate(anchored):
            p = n + t
            weights[idx, p] = weights[p, idx] = anchors.soft_weight
            pos[p] = anchors.entries[idx]
            fixed[p] = True
        return delta, weights, pos, fixed

    delta = d.values.astype(np.float64)
    weights = np.ones((n, n), dtype=np.float64)
    np.fill_diagonal(weights, 0.0)
    pos = np.array(init, dtype=np.float64, copy=True)
    fixed = np.zeros(n, dtype=bool)
    if anchors is not None and anchors.mode == "hard":
        for idx, xy in anchors.entries.items():
            pos[idx] = xy
            fixed[idx] = True
    return delta, weights, pos, fixed


def smacof(
    d: DissimilarityMatrix,
    init: Layout,
    anchors: AnchorSet | None = None,
    max_iter: int = DEFAULT_MAX_ITER,
    eps_rel: float = DEFAULT_EPS_REL,
) -> Layout:
    """Stress majorization via Guttman transforms.

    Stops when the relative stress decrease falls below eps_rel (the final
    sub-threshold step is not applied, so an already-converged start is
    returned unchanged). Hard anchors never move; soft anchors attract their
    files toward the anchor position with weight soft_weight. Coincident
    points contribute nothing to the transform for their pair.
    """
    if init.positions.shape[0] != d.n:
        raise ValueError("init dimension must match the dissimilarity matrix")

    delta, weights, pos, fixed = _augmented_problem(d, init.positions, anchors)
    n_total = pos.shape[0]
    free = ~fixed
    uniform = not fixed.any()

    solver = None
    if not uniform:
        lap = -weights.copy()
        np.fill_diagonal(lap, 0.0)
        np.fill_diagonal(lap, -lap.sum(axis=1))
        v_ff = lap[np.ix_(free, free)]
        v_fa = lap[np.ix_(free, fixed)]
        x_a = pos[fixed]
        try:
            inv_ff = np.linalg.inv(v_ff)
        except np.linalg.LinAlgError:
            inv_ff = np.linalg.pinv(v_ff)
        solver = (inv_ff, v_fa, x_a)

    stress_prev = _kernels.pair_stress(delta, weights, pos)
    trace = [stress_prev]
    for _ in range(max_iter):
        if stress_prev <= 0.0:
            break
        pull = _kernels.guttman_pull(delta, weights, pos)
        cand = pos.copy()
        if uniform:
            cand = pull / n_total
        else:
            inv_ff, v_fa, x_a = solver
            cand[free] = inv_ff @ (pull[free] - v_fa @ x_a)
        stress_cand = _kernels.pair_stress(delta, weights, cand)
        if stress_prev - stress_cand < eps_rel * stress_prev:
            break
        pos = cand
        stress_prev = stress_cand
        trace.append(stress_cand)

    return Layout(positions=pos[: d.n], stress_trace=tuple(trace), seed=init.seed)


def normalize_layout(layout: Layout, margin: float = DEFAULT_MARGIN) -> Layout:
    """Uniformly scale and translate so the bounding box fits [margin, 1-margin]^2.

    Aspect ratio is preserved; the shorter extent is centered. A degenerate
    (single point or zero extent) layout collapses to the map center.
    """
    pos = layout.positions
    if pos.shape[0] == 0:
        return layout
    lo = pos.min(axis=0)
    hi = pos.max(axis=0)
    span = hi - lo
    extent = float(span.max())
    target = 1.0 - 2.0 * margin
    if extent <= 0.0:
        out = np.full_like(pos, 0.5)
    else:
        scale = target / extent
        out = (pos - lo) * scale + margin
        slack = (target - span * scale) / 2.0
        out += slack  # centers the shorter axis
    return replace(layout, positions=out)


def procrustes_align(src: np.ndarray, dst: np.ndarray, allow_scale: bool = False):
    """Align src onto dst by translation + rotation/reflection (optionally scale).

    Returns (aligned_src, relative_residual) where the residual is the
    Frobenius misfit over the Frobenius norm of the centered target.
    """
    src = np.asarray(src, dtype=np.float64)
    dst = np.asarray(dst, dtype=np.float64)
    mu_s = src.mean(axis=0)
    mu_d = dst.mean(axis=0)
    a = src - mu_s
    b = dst - mu_d
    u, sing, vt = np.linalg.svd(a.T @ b)
    rot = u @ vt
    scale = 1.0
    if allow_scale:
        denom = float((a * a).sum())
        scale = float(sing.sum()) / denom if denom > 0.0 else 1.0
    aligned = scale * (a @ rot) + mu_d
    norm_b = float(np.linalg.norm(b))
    residual = float(np.linalg.norm(aligned - dst)) / max(norm_b, 1e-300)
    return aligned, residual


def embed(
    d: DissimilarityMatrix,
    k: int | None = None,
    max_iter: int = DEFAULT_MAX_ITER,
    eps_rel: float = DEFAULT_EPS_REL,
    seed: int = 0,
    margin: float = DEFAULT_MARGIN,
) -> Layout:
    """Fresh layout: Isomap-style geodesic seeding, then SMACOF on the raw distances."""
    n = d.n
    if n == 0:
        return Layout(positions=np.zeros((0, 2)), seed=seed)
    if n == 1:
        return Layout(positions=np.array([[0.5, 0.5]]), seed=seed)
    if k is None:
        k = min(7, n - 1)

    graph = knn_graph(d, k)
    geo = geodesic_distances(graph)
    init_pos = classical_mds(geo.values)
    init_pos = _jitter_coincident(init_pos, d.values, seed)
    refined = smacof(d, Layout(positions=init_pos, seed=seed), max_iter=max_iter, eps_rel=eps_rel)
    return normalize_layout(refined, margin=margin)


def _jitter_coincident(pos: np.ndarray, delta: np.ndarray, seed: int) -> np.ndarray:
    """Separate exactly coincident points that ought to be apart (randomized fallback).

    SMACOF cannot split a coincident pair (their pull ratio is defined as 0),
    so a seeded micro-jitter is applied when a pair with positive target
    distance starts at the same coordinates.
    """
    n = pos.shape[0]
    diff = pos[:, None, :] - pos[None, :, :]
    same = (diff == 0.0).all(axis=2)
    np.fill_diagonal(same, False)
    stuck = same & (delta > 0.0)
    if not stuck.any():
        return pos
    rng = np.random.default_rng(seed)
    out = pos.copy()
    idx = np.unique(np.nonzero(stuck)[0])
    out[idx] += rng.normal(scale=1e-6, size=(idx.shape[0], 2))
    return out


def incremental_layout(
    prev_positions: dict[str, tuple[float, float]],
    d_new: DissimilarityMatrix,
    soft_weight: float = DEFAULT_SOFT_WEIGHT,
    k: int | None = None,
    max_iter: int = DEFAULT_MAX_ITER,
    eps_rel: float = DEFAULT_EPS_REL,
    seed: int = 0,
    margin: float = DEFAULT_MARGIN,
) -> tuple[Layout, bool]:
    """Stable re-layout against a previous version of the corpus.

    Surviving files start at (and are softly anchored to) their previous
    positions; new files start at the inverse-dissimilarity-weighted centroid
    of their three nearest surviving neighbors. Returns (layout,
    fresh_fallback); the flag is True when no path overlapped and a cold
    layout was computed instead.
    """
    labels = d_new.labels
    n = d_new.n
    survivors = [i for i, p in enumerate(labels) if p in prev_positions]
    if not survivors:
        return embed(d_new, k=k, max_iter=max_iter, eps_rel=eps_rel, seed=seed, margin=margin), True
    if n == 1:
        return Layout(positions=np.array([[0.5, 0.5]]), seed=seed), False

    init = np.empty((n, 2), dtype=np.float64)
    survivor_set = set(survivors)
    for i in survivors:
        init[i] = prev_positions[labels[i]]
    for i in range(n):
        if i in survivor_set:
            continue
        order = np.argsort(d_new.values[i], kind="stable")
        nearest = [int(j) for j in order if int(j) in survivor_set and int(j) != i][:3]
        if not nearest:
            init[i] = (0.5, 0.5)
            continue
        w = np.array([1.0 / max(float(d_new.values[i, j]), 1e-9) for j in nearest])
        pts = np.array([init[j] for j in nearest])
        init[i] = (w[:, None] * pts).sum(axis=0) / w.sum()

    scaled = _rescale_to_configuration(d_new, init)
    anchors = AnchorSet(
        entries={i: (float(init[i, 0]), float(init[i, 1])) for i in survivors},
        mode="soft",
        soft_weight=soft_weight,
    )
    refined = smacof(scaled, Layout(positions=init, seed=seed), anchors=anchors, max_iter=max_iter, eps_rel=eps_rel)
    return normalize_layout(refined, margin=margin), False


def _rescale_to_configuration(d: DissimilarityMatrix, pos: np.ndarray) -> DissimilarityMatrix:
    """Scale the target distances so the given configuration is majorization-stable.

    The Guttman map is invariant under scaling of its input configuration, so
    for a layout that is a (normalized) similarity image of a converged
    solution, one transform step reproduces the solution at original scale.
    Scaling the targets by |centered(pos)| / |step image| therefore turns the
    warm start itself into a fixed point instead of letting the first
    iterations drag everything back to raw dissimilarity scale.
    """
    n = d.n
    if n < 2:
        return d
    weights = np.ones((n, n), dtype=np.float64)
    np.fill_diagonal(weights, 0.0)
    image = _kernels.guttman_pull(d.values, weights, np.ascontiguousarray(pos, dtype=np.float64)) / n
    centered = pos - pos.mean(axis=0)
    num = float(np.linalg.norm(centered))
    den = float(np.linalg.norm(image))  # step images are centered already
    if den <= 0.0 or num <= 0.0:
        return d
    return DissimilarityMatrix(values=d.values * (num / den), labels=d.labels)
