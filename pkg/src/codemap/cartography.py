"""Base-map rendering primitives: hill shading, contour lines, label placement."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .corpus import VectorSpace
from .embedding import Layout
from .terrain import ElevationGrid, sea_mask

DEFAULT_AZIMUTH_DEG = 315.0  # cartographic upper-left light
DEFAULT_ALTITUDE_DEG = 45.0
DEFAULT_Z_SCALE = 0.05
DEFAULT_CONTOUR_INTERVAL = 0.1

LABEL_CHAR_WIDTH = 0.6  # box width = chars * 0.6 * fontSize
LABEL_HEIGHT = 1.2  # box height = 1.2 * fontSize
DEFAULT_MAX_LABELS = 60
DEFAULT_FONT_MIN = 0.012
DEFAULT_FONT_MAX = 0.030
DEFAULT_FONT_SCALE = 0.004  # fontSize = scale * sqrt(loc), clamped
DEFAULT_KEYWORD_FONT = 0.036
DEFAULT_ISOLATED_RADIUS = 0.15
ISOLATED_OPACITY = 0.6


def hillshade(
    grid: ElevationGrid,
    azimuth_deg: float = DEFAULT_AZIMUTH_DEG,
    altitude_deg: float = DEFAULT_ALTITUDE_DEG,
    z_scale: float = DEFAULT_Z_SCALE,
) -> np.ndarray:
    """Lambertian shade in [0,1] from gradient-derived surface normals.

    Gradients use central differences (one-sided at borders); the light
    azimuth is measured clockwise from north, altitude up from the horizon.
    """
    spacing = 1.0 / grid.resolution
    gy, gx = np.gradient(grid.heights, spacing)
    nx = -z_scale * gx
    ny = -z_scale * gy
    nz = np.ones_like(nx)
    norm = np.sqrt(nx * nx + ny * ny + nz * nz)

    az = math.radians(azimuth_deg)
    alt = math.radians(altitude_deg)
    lx = math.sin(az) * math.cos(alt)
    ly = math.cos(az) * math.cos(alt)
    lz = math.sin(alt)

    shade = (nx * lx + ny * ly + nz * lz) / norm
    return np.maximum(shade, 0.0)


@dataclass(frozen=True)
class ContourLine:
    level: float
    points: tuple[tuple[float, float], ...]

    @property
    def closed(self) -> bool:
        return len(self.points) > 2 and self.points[0] == self.points[-1]


@dataclass(frozen=True)
class ContourSet:
    lines: tuple[ContourLine, ...]


def _edge_point(heights: np.ndarray, res: int, level: float, edge: tuple[str, int, int]):
    kind, r, c = edge
    if kind == "h":
        v0 = heights[r, c]
        v1 = heights[r, c + 1]
    else:
        v0 = heights[r, c]
        v1 = heights[r + 1, c]
    t = (level - v0) / (v1 - v0)
    step = 1.0 / res
    x = (c + 0.5) * step
    y = (r + 0.5) * step
    if kind == "h":
        return (x + t * step, y)
    return (x, y + t * step)


# Segment table: per marching-squares case, pairs of crossed cell edges
# (B/R/T/L). Cases 5 and 10 are saddles resolved by the cell-center average.
_CASE_SEGMENTS = {
    0: [],
    1: [("L", "B")],
    2: [("B", "R")],
    3: [("L", "R")],
    4: [("R", "T")],
    6: [("B", "T")],
    7: [("L", "T")],
    8: [("T", "L")],
    9: [("B", "T")],
    11: [("T", "R")],
    12: [("R", "L")],
    13: [("B", "R")],
    14: [("L", "B")],
    15: [],
}


def iso_lines(grid: ElevationGrid, level: float) -> tuple[ContourLine, ...]:
    """Marching-squares polylines of one iso-level over the cell-center lattice.

    Every returned polyline is either closed (first point repeated last) or
    terminates on the lattice boundary on both ends.
    """
    h = grid.heights
    res = grid.resolution
    inside = h >= level

    ins = inside.astype(np.int8)
    codes = ins[:-1, :-1] | (ins[:-1, 1:] << 1) | (ins[1:, 1:] << 2) | (ins[1:, :-1] << 3)
    active = np.argwhere((codes != 0) & (codes != 15))

    segments: list[tuple[tuple, tuple]] = []
    for r, c in active:
        r, c = int(r), int(c)
        code = int(codes[r, c])
        edge_keys = {
            "B": ("h", r, c),
            "R": ("v", r, c + 1),
            "T": ("h", r + 1, c),
            "L": ("v", r, c),
        }
        if code in (5, 10):
            center = (h[r, c] + h[r, c + 1] + h[r + 1, c + 1] + h[r + 1, c]) / 4.0
            center_inside = center >= level
            if code == 5:
                pairs = [("L", "T"), ("B", "R")] if center_inside else [("L", "B"), ("R", "T")]
            else:
                pairs = [("L", "B"), ("R", "T")] if center_inside else [("L", "T"), ("B", "R")]
        else:
            pairs = _CASE_SEGMENTS[code]
        for a, b in pairs:
            segments.append((edge_keys[a], edge_keys[b]))

    adjacency: dict[tuple, list[tuple]] = {}
    for a, b in segments:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)

    used: set[frozenset] = set()
    lines: list[ContourLine] = []

    def walk(start: tuple) -> list[tuple]:
        chain = [start]
        current = start
        while True:
            nxt = None
            for cand in adjacency[current]:
                key = frozenset((current, cand)) if current != cand else (current,)
                if key not in used:
                    nxt = cand
                    used.add(key)
                    break
            if nxt is None:
                return chain
            chain.append(nxt)
            current = nxt

    open_starts = sorted(k for k, nbrs in adjacency.items() if len(nbrs) == 1)
    for start in open_starts:
        if all(frozenset((start, nbr)) in used for nbr in adjacency[start]):
            continue
        chain = walk(start)
        pts = tuple(_edge_point(h, res, level, e) for e in chain)
        lines.append(ContourLine(level=level, points=pts))

    for start in sorted(adjacency):
        if all(frozenset((start, nbr)) in used for nbr in adjacency[start] if nbr != start):
            continue
        chain = walk(start)  # traverses the closing segment, so chain[-1] == start
        pts = tuple(_edge_point(h, res, level, e) for e in chain)
        lines.append(ContourLine(level=level, points=pts))

    return tuple(lines)


def contours(grid: ElevationGrid, interval: float = DEFAULT_CONTOUR_INTERVAL) -> ContourSet:
    """Iso-lines at sea level + m * interval for every m >= 1 below the peak height 1."""
    if interval <= 0.0:
        raise ValueError("contour interval must be positive")
    lines: list[ContourLine] = []
    m = 1
    while True:
        level = grid.sea_level + m * interval
        if level >= 1.0:
            break
        lines.extend(iso_lines(grid, level))
        m += 1
    return ContourSet(lines=tuple(lines))


@dataclass(frozen=True)
class Label:
    text: str
    x: float
    y: float
    font_size: float
    kind: str  # "filename" | "keyword"
    opacity: float = 1.0

    def box(self) -> tuple[float, float, float, float]:
        """(cx, cy, w, h) of the estimated bounding box."""
        w = len(self.text) * LABEL_CHAR_WIDTH * self.font_size
        h = LABEL_HEIGHT * self.font_size
        return (self.x, self.y, w, h)


@dataclass(frozen=True)
class LabelSet:
    labels: tuple[Label, ...]


def boxes_overlap(a: Label, b: Label) -> bool:
    ax, ay, aw, ah = a.box()
    bx, by, bw, bh = b.box()
    return abs(ax - bx) < (aw + bw) / 2.0 and abs(ay - by) < (ah + bh) / 2.0


def _clamp_center(x: float, half: float) -> float:
    if half >= 0.5:
        return 0.5
    return min(max(x, half), 1.0 - half)


def place_labels(
    files: list[dict],
    keywords: list[dict] | None = None,
    max_labels: int = DEFAULT_MAX_LABELS,
    font_min: float = DEFAULT_FONT_MIN,
    font_max: float = DEFAULT_FONT_MAX,
    font_scale: float = DEFAULT_FONT_SCALE,
    keyword_font: float = DEFAULT_KEYWORD_FONT,
    isolated_radius: float = DEFAULT_ISOLATED_RADIUS,
) -> LabelSet:
    """Greedy non-overlapping placement, largest files first, then keywords.

    Files need {basename, loc, x, y}; keywords need {text, score, x, y}.
    Labels whose file sits farther than isolated_radius from its nearest
    neighbor are kept but faded (isolated elements should not dominate).
    Boxes are nudged inside the unit square before the overlap check.
    """
    keywords = keywords or []
    positions = np.array([[f["x"], f["y"]] for f in files], dtype=np.float64)
    nn_dist = np.full(len(files), np.inf)
    if len(files) > 1:
        diff = positions[:, None, :] - positions[None, :, :]
        dist = np.sqrt((diff * diff).sum(axis=2))
        np.fill_diagonal(dist, np.inf)
        nn_dist = dist.min(axis=1)

    candidates: list[Label] = []
    file_order = sorted(
        range(len(files)), key=lambda i: (-files[i]["loc"], files[i]["basename"], files[i]["x"])
    )
    for i in file_order:
        f = files[i]
        size = min(max(font_scale * math.sqrt(max(f["loc"], 1)), font_min), font_max)
        opacity = ISOLATED_OPACITY if nn_dist[i] > isolated_radius else 1.0
        half_w = len(f["basename"]) * LABEL_CHAR_WIDTH * size / 2.0
        half_h = LABEL_HEIGHT * size / 2.0
        candidates.append(
            Label(
                text=f["basename"],
                x=_clamp_center(f["x"], half_w),
                y=_clamp_center(f["y"], half_h),
                font_size=size,
                kind="filename",
                opacity=opacity,
            )
        )
    for kw in sorted(keywords, key=lambda k: (-k["score"], k["text"])):
        half_w = len(kw["text"]) * LABEL_CHAR_WIDTH * keyword_font / 2.0
        half_h = LABEL_HEIGHT * keyword_font / 2.0
        candidates.append(
            Label(
                text=kw["text"],
                x=_clamp_center(kw["x"], half_w),
                y=_clamp_center(kw["y"], half_h),
                font_size=keyword_font,
                kind="keyword",
            )
        )

    accepted: list[Label] = []
    for cand in candidates:
        if len(accepted) >= max_labels:
            break
        if any(boxes_overlap(cand, a) for a in accepted):
            continue
        accepted.append(cand)
    return LabelSet(labels=tuple(accepted))


def region_keywords(
    grid: ElevationGrid, layout: Layout, vs: VectorSpace, per_region: int = 2
) -> list[dict]:
    """Top tf-idf terms per connected land region, one keyword entry per region.

    Each entry carries the joined top terms, the summed tf-idf score, and the
    region's land-cell centroid.
    """
    land = sea_mask(grid)
    labels_grid, n_regions = ndimage.label(land)
    if n_regions == 0 or layout.positions.shape[0] == 0:
        return []

    res = grid.resolution
    region_rows: dict[int, list[int]] = {}
    for i, (x, y) in enumerate(layout.positions):
        r = min(max(int(y * res), 0), res - 1)
        c = min(max(int(x * res), 0), res - 1)
        region = int(labels_grid[r, c])
        if region > 0:
            region_rows.setdefault(region, []).append(i)

    out: list[dict] = []
    vocab = np.asarray(vs.vocabulary)
    for region in sorted(region_rows):
        rows = region_rows[region]
        weight = np.asarray(vs.matrix[rows].sum(axis=0)).ravel()
        if weight.size == 0 or float(weight.max()) <= 0.0:
            continue
        top = np.argsort(-weight, kind="stable")[:per_region]
        terms = [str(vocab[t]) for t in top if weight[t] > 0.0]
        if not terms:
            continue
        cells = np.argwhere(labels_grid == region)
        cy = float((cells[:, 0].mean() + 0.5) / res)
        cx = float((cells[:, 1].mean() + 0.5) / res)
        out.append({"text": " · ".join(terms), "score": float(weight[top[0]]), "x": cx, "y": cy})
    return out
