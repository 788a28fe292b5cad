"""Thematic layers above the base map: markers, heat splats, flow-map arrows."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .embedding import Layout

MERGE_RADIUS_FACTOR = 0.5  # merge while cluster gap <= factor * distance to source
SOURCE_PULL = 0.25  # internal nodes move this fraction toward the source


@dataclass(frozen=True)
class Marker:
    file_index: int
    magnitude: float  # sqrt of the hit count; render radius scales with this
    tag: str = ""


@dataclass(frozen=True)
class MarkerLayer:
    markers: tuple[Marker, ...]

    def to_json_dict(self) -> dict:
        return {
            "kind": "markers",
            "markers": [
                {"fileIndex": m.file_index, "magnitude": m.magnitude, "tag": m.tag}
                for m in self.markers
            ],
        }


def marker_layer(hits: list[dict], tag: str = "") -> MarkerLayer:
    """Markers sized by sqrt(count), so marker area tracks the hit count."""
    markers = []
    for hit in hits:
        count = hit["count"]
        if count < 1:
            raise ValueError("hit counts must be >= 1")
        markers.append(Marker(file_index=hit["fileIndex"], magnitude=math.sqrt(count), tag=tag))
    return MarkerLayer(markers=tuple(markers))


@dataclass(frozen=True)
class HeatLayer:
    intensity: tuple[float, ...]  # per file, in [0,1]

    def to_json_dict(self) -> dict:
        return {"kind": "heat", "intensity": list(self.intensity)}


def heat_layer(values: list[float] | np.ndarray) -> HeatLayer:
    """Min-max normalized per-file intensity; a constant input maps to 0.5."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError("heat values must be finite")
    if arr.size == 0:
        return HeatLayer(intensity=())
    lo = float(arr.min())
    hi = float(arr.max())
    if hi == lo:
        return HeatLayer(intensity=tuple(0.5 for _ in range(arr.size)))
    return HeatLayer(intensity=tuple(float(v) for v in (arr - lo) / (hi - lo)))


@dataclass(frozen=True)
class FlowNode:
    pos: tuple[float, float]
    flow: float


@dataclass(frozen=True)
class FlowTree:
    """Arrow tree rooted at the source; parallel edges share merged trunks."""

    source: tuple[float, float]
    nodes: tuple[FlowNode, ...]  # node 0 is the root at the source
    edges: tuple[tuple[int, int], ...]  # (parent, child)
    leaves: dict[int, int] = field(default_factory=dict)  # node index -> file index

    def total_length(self) -> float:
        acc = 0.0
        for p, c in self.edges:
            px, py = self.nodes[p].pos
            cx, cy = self.nodes[c].pos
            acc += math.hypot(px - cx, py - cy)
        return acc

    def to_json_dict(self) -> dict:
        return {
            "kind": "flow",
            "source": list(self.source),
            "nodes": [{"x": n.pos[0], "y": n.pos[1], "flow": n.flow} for n in self.nodes],
            "edges": [list(e) for e in self.edges],
            "leaves": [{"node": n, "file": f} for n, f in sorted(self.leaves.items())],
        }


def flow_layer(source: int, targets: list[dict], layout: Layout) -> FlowTree:
    """Merge call arrows into a trunk tree by single-linkage clustering.

    Targets are {fileIndex, weight}. Clusters keep merging while the smallest
    gap between two clusters stays within half their joint distance to the
    source; each merge adds an internal node at the flow-weighted centroid of
    its children, pulled a quarter of the way toward the source (except for
    zero-spread merges, which keep the shared point). Parent flows are the
    sums of their children, so flow is conserved exactly.
    """
    if not targets:
        raise ValueError("flow_layer requires at least one target")
    pos = layout.positions
    src = (float(pos[source, 0]), float(pos[source, 1]))

    nodes: list[FlowNode] = [FlowNode(pos=src, flow=0.0)]  # root placeholder
    edges: list[tuple[int, int]] = []
    leaves: dict[int, int] = {}

    # A cluster: (member target ids, tree node id, centroid, flow)
    clusters: dict[int, dict] = {}
    points: list[tuple[float, float]] = []
    for t, target in enumerate(targets):
        idx = target["fileIndex"]
        weight = float(target["weight"])
        if weight <= 0.0:
            raise ValueError("flow weights must be positive")
        p = (float(pos[idx, 0]), float(pos[idx, 1]))
        points.append(p)
        node_id = len(nodes)
        nodes.append(FlowNode(pos=p, flow=weight))
        leaves[node_id] = idx
        clusters[t] = {"members": [t], "node": node_id, "pos": p, "flow": weight}

    def linkage(a: dict, b: dict) -> float:
        return min(
            math.hypot(points[i][0] - points[j][0], points[i][1] - points[j][1])
            for i in a["members"]
            for j in b["members"]
        )

    while len(clusters) > 1:
        best = None
        for ia in sorted(clusters):
            for ib in sorted(clusters):
                if ib <= ia:
                    continue
                gap = linkage(clusters[ia], clusters[ib])
                cand = (gap, ia, ib)
                if best is None or cand < best:
                    best = cand
        gap, ia, ib = best
        a, b = clusters[ia], clusters[ib]
        flow = a["flow"] + b["flow"]
        cx = (a["pos"][0] * a["flow"] + b["pos"][0] * b["flow"]) / flow
        cy = (a["pos"][1] * a["flow"] + b["pos"][1] * b["flow"]) / flow
        if gap > MERGE_RADIUS_FACTOR * math.hypot(cx - src[0], cy - src[1]):
            break
        if a["pos"] == b["pos"]:
            merged_pos = a["pos"]  # zero-spread merge: keep the shared point
        else:
            merged_pos = (
                cx + SOURCE_PULL * (src[0] - cx),
                cy + SOURCE_PULL * (src[1] - cy),
            )
        node_id = len(nodes)
        nodes.append(FlowNode(pos=merged_pos, flow=flow))
        edges.append((node_id, a["node"]))
        edges.append((node_id, b["node"]))
        clusters[ia] = {
            "members": a["members"] + b["members"],
            "node": node_id,
            "pos": merged_pos,
            "flow": flow,
        }
        del clusters[ib]

    total = 0.0
    for cid in sorted(clusters):
        cluster = clusters[cid]
        edges.append((0, cluster["node"]))
        total += cluster["flow"]
    nodes[0] = FlowNode(pos=src, flow=total)

    return FlowTree(source=src, nodes=tuple(nodes), edges=tuple(edges), leaves=leaves)
