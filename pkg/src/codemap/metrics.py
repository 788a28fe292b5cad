"""Pairwise dissimilarity matrices: lexical (cosine), structural (hops), blended."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .corpus import VectorSpace

HOP_STEP = 0.1
DEFAULT_ALPHA = 0.6  # structure-dominant blend


@dataclass(frozen=True)
class DissimilarityMatrix:
    values: np.ndarray  # symmetric n x n, zero diagonal
    labels: tuple[str, ...]

    def __post_init__(self):
        validate_dissimilarity(self.values, unit_range=False)
        if self.values.shape[0] != len(self.labels):
            raise ValueError("labels must match matrix dimension")
        self.values.flags.writeable = False

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def to_json_dict(self) -> dict:
        return {"labels": list(self.labels), "values": self.values.tolist()}


def validate_dissimilarity(values: np.ndarray, unit_range: bool = True) -> None:
    """Check symmetry, zero diagonal, non-negativity, and optionally the [0,1] range."""
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError("dissimilarity matrix must be square")
    if not np.allclose(values, values.T, atol=0.0, rtol=0.0):
        raise ValueError("dissimilarity matrix must be exactly symmetric")
    if np.any(np.diag(values) != 0.0):
        raise ValueError("dissimilarity diagonal must be zero")
    if np.any(values < 0.0):
        raise ValueError("dissimilarities must be non-negative")
    if unit_range and np.any(values > 1.0):
        raise ValueError("dissimilarities must not exceed 1")


def lexical_dissimilarity(vs: VectorSpace) -> DissimilarityMatrix:
    """1 - cosine over unit tf-idf vectors, clamped to [0,1].

    A file without terms (zero vector) sits at distance 1 from every other
    file and 0 from itself.
    """
    sim = np.asarray((vs.matrix @ vs.matrix.T).todense(), dtype=np.float64)
    d = 1.0 - sim
    for i in vs.empty_rows:
        d[i, :] = 1.0
        d[:, i] = 1.0
    d = (d + d.T) / 2.0
    np.clip(d, 0.0, 1.0, out=d)
    np.fill_diagonal(d, 0.0)
    return DissimilarityMatrix(values=d, labels=vs.labels)


def reference_distance(edges: dict[int, set[int]], labels: tuple[str, ...]) -> DissimilarityMatrix:
    """Hop-based structural distance over an undirected view of the reference graph.

    d(i,j) = min(1, 0.1 * hops(i,j)); unreachable pairs sit at 1. Files that
    reference each other directly are one hop apart (0.1).
    """
    n = len(labels)
    undirected: list[set[int]] = [set() for _ in range(n)]
    for a, targets in edges.items():
        for b in targets:
            if a != b:
                undirected[a].add(b)
                undirected[b].add(a)

    d = np.ones((n, n), dtype=np.float64)
    np.fill_diagonal(d, 0.0)
    for start in range(n):
        hops = {start: 0}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            if HOP_STEP * (hops[cur] + 1) >= 1.0:
                continue  # further hops cannot beat the unreachable value
            for nxt in undirected[cur]:
                if nxt not in hops:
                    hops[nxt] = hops[cur] + 1
                    queue.append(nxt)
        for node, h in hops.items():
            if node != start:
                d[start, node] = min(1.0, HOP_STEP * h)
    d = np.minimum(d, d.T)
    return DissimilarityMatrix(values=d, labels=labels)


def blend(lex: DissimilarityMatrix, struct: DissimilarityMatrix, alpha: float) -> DissimilarityMatrix:
    """Entrywise alpha * struct + (1 - alpha) * lex."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if lex.labels != struct.labels or lex.values.shape != struct.values.shape:
        raise ValueError("blend inputs must share dimensions and label order")
    if alpha == 0.0:
        return lex
    if alpha == 1.0:
        return struct
    values = alpha * struct.values + (1.0 - alpha) * lex.values
    np.fill_diagonal(values, 0.0)
    return DissimilarityMatrix(values=values, labels=lex.labels)
