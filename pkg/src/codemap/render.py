"""Deterministic SVG rendering of the base map and its thematic overlays.

The hill-shaded hypsometric land fill is rasterized into an embedded PNG
(vector elements for a full grid would be enormous); contours, coastline,
markers, arrows, and labels stay vector. Output is byte-stable for identical
inputs: fixed float formatting, fixed layer order, fixed PNG encoding.
"""

from __future__ import annotations

import base64
import math
import struct
import zlib
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from .cartography import (
    DEFAULT_ALTITUDE_DEG,
    DEFAULT_AZIMUTH_DEG,
    DEFAULT_CONTOUR_INTERVAL,
    DEFAULT_Z_SCALE,
    contours,
    hillshade,
    iso_lines,
)
from .model import MapModel
from .overlays import FlowTree, HeatLayer, MarkerLayer
from .terrain import sea_mask

SHADE_FLOOR = 0.35  # land brightness = floor + (1 - floor) * shade


@dataclass(frozen=True)
class Palette:
    water: tuple[int, int, int] = (158, 196, 225)
    ramp: tuple[tuple[float, tuple[int, int, int]], ...] = (
        (0.00, (148, 191, 139)),
        (0.25, (168, 198, 143)),
        (0.50, (205, 196, 150)),
        (0.75, (192, 163, 128)),
        (0.90, (200, 200, 200)),
        (1.00, (245, 245, 245)),
    )
    contour: tuple[int, int, int] = (128, 112, 96)
    coast: tuple[int, int, int] = (90, 110, 130)
    marker: tuple[int, int, int] = (220, 60, 50)
    heat: tuple[int, int, int] = (255, 140, 0)
    flow: tuple[int, int, int] = (60, 60, 180)
    label: tuple[int, int, int] = (40, 40, 40)
    keyword: tuple[int, int, int] = (70, 70, 110)

    @classmethod
    def from_json_dict(cls, data: dict) -> "Palette":
        kwargs = {}
        for name in ("water", "contour", "coast", "marker", "heat", "flow", "label", "keyword"):
            if name in data:
                kwargs[name] = _parse_hex(data[name])
        if "ramp" in data:
            kwargs["ramp"] = tuple((float(t), _parse_hex(c)) for t, c in data["ramp"])
        return cls(**kwargs)


def _parse_hex(text: str) -> tuple[int, int, int]:
    text = text.lstrip("#")
    return (int(text[0:2], 16), int(text[2:4], 16), int(text[4:6], 16))


def _hex(rgb: tuple[int, int, int]) -> str:
    return "#{:02x}{:02x}{:02x}".format(*rgb)


@dataclass(frozen=True)
class RenderOptions:
    size: int = 1024
    palette: Palette = field(default_factory=Palette)
    contour_interval: float = DEFAULT_CONTOUR_INTERVAL
    light_azimuth: float = DEFAULT_AZIMUTH_DEG
    light_altitude: float = DEFAULT_ALTITUDE_DEG
    z_scale: float = DEFAULT_Z_SCALE
    arrow_heads: str = "targets"  # "targets" | "source"


def write_png(rgba: np.ndarray) -> bytes:
    """Minimal RGBA PNG encoder (filter 0, one IDAT); deterministic output."""
    h, w = rgba.shape[:2]
    raw = b"".join(b"\x00" + rgba[row].tobytes() for row in range(h))

    def chunk(kind: bytes, payload: bytes) -> bytes:
        crc = zlib.crc32(kind + payload) & 0xFFFFFFFF
        return struct.pack(">I", len(payload)) + kind + payload + struct.pack(">I", crc)

    ihdr = struct.pack(">IIBBBBB", w, h, 8, 6, 0, 0, 0)
    return (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", ihdr)
        + chunk(b"IDAT", zlib.compress(raw, 6))
        + chunk(b"IEND", b"")
    )


def _ramp_color(ramp, t: float) -> tuple[float, float, float]:
    if t <= ramp[0][0]:
        return ramp[0][1]
    for (t0, c0), (t1, c1) in zip(ramp, ramp[1:]):
        if t <= t1:
            f = (t - t0) / (t1 - t0) if t1 > t0 else 0.0
            return tuple(c0[i] + f * (c1[i] - c0[i]) for i in range(3))
    return ramp[-1][1]


def land_raster(model: MapModel, options: RenderOptions) -> np.ndarray:
    """RGBA grid (row 0 = north) of the shaded hypsometric land fill; sea is transparent."""
    grid = model.grid
    shade = hillshade(grid, options.light_azimuth, options.light_altitude, options.z_scale)
    land = sea_mask(grid)
    res = grid.resolution

    t = (grid.heights - grid.sea_level) / max(1.0 - grid.sea_level, 1e-9)
    np.clip(t, 0.0, 1.0, out=t)

    stops = np.array([s for s, _ in options.palette.ramp], dtype=np.float64)
    colors = np.array([c for _, c in options.palette.ramp], dtype=np.float64)
    rgb = np.empty((res, res, 3), dtype=np.float64)
    for ch in range(3):
        rgb[:, :, ch] = np.interp(t, stops, colors[:, ch])

    bright = SHADE_FLOOR + (1.0 - SHADE_FLOOR) * shade
    rgb *= bright[:, :, None]

    rgba = np.zeros((res, res, 4), dtype=np.uint8)
    rgba[:, :, :3] = np.clip(np.rint(rgb), 0, 255).astype(np.uint8)
    rgba[:, :, 3] = np.where(land, 255, 0).astype(np.uint8)
    return rgba[::-1]  # grid row 0 is south; image row 0 is north


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _polyline_points(points, size: int) -> str:
    return " ".join(f"{_fmt(x * size)},{_fmt((1.0 - y) * size)}" for x, y in points)


def _arrow_head(tip, tail, size: int, width: float) -> str:
    """Filled triangle at `tip`, pointing away from `tail`."""
    tx, ty = tip[0] * size, (1.0 - tip[1]) * size
    bx, by = tail[0] * size, (1.0 - tail[1]) * size
    dx, dy = tx - bx, ty - by
    length = math.hypot(dx, dy)
    if length <= 0.0:
        return ""
    ux, uy = dx / length, dy / length
    px, py = -uy, ux
    reach = max(6.0, 3.0 * width)
    half = reach * 0.5
    p1 = (tx, ty)
    p2 = (tx - reach * ux + half * px, ty - reach * uy + half * py)
    p3 = (tx - reach * ux - half * px, ty - reach * uy - half * py)
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (p1, p2, p3))


def render_svg(model: MapModel, overlays: list | None = None, options: RenderOptions | None = None) -> str:
    """Compose the full SVG document: water, land, contours, coast, overlays, labels."""
    overlays = overlays or []
    options = options or RenderOptions()
    size = options.size
    pal = options.palette
    grid = model.grid

    parts: list[str] = []
    parts.append('<?xml version="1.0" encoding="UTF-8"?>')
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">'
    )

    # 1. water
    parts.append(f'<rect x="0" y="0" width="{size}" height="{size}" fill="{_hex(pal.water)}"/>')

    # 2. land (hypsometric fill modulated by hillshade)
    has_land = bool(np.any(grid.heights >= grid.sea_level)) and float(grid.heights.max()) > 0.0
    if has_land:
        png = write_png(land_raster(model, options))
        encoded = base64.b64encode(png).decode("ascii")
        parts.append(
            f'<image x="0" y="0" width="{size}" height="{size}" preserveAspectRatio="none" '
            f'xlink:href="data:image/png;base64,{encoded}"/>'
        )

        # 3. contours
        contour_set = contours(grid, options.contour_interval)
        for line in contour_set.lines:
            parts.append(
                f'<polyline fill="none" stroke="{_hex(pal.contour)}" stroke-width="0.6" '
                f'stroke-opacity="0.55" points="{_polyline_points(line.points, size)}"/>'
            )

        # 4. coastline
        for line in iso_lines(grid, grid.sea_level):
            parts.append(
                f'<polyline fill="none" stroke="{_hex(pal.coast)}" stroke-width="1.2" '
                f'stroke-opacity="0.9" points="{_polyline_points(line.points, size)}"/>'
            )

    positions = [(f.x, f.y) for f in model.files]

    # 5. overlays: heat, then markers, then flow trees, then annotations
    for overlay in overlays:
        if isinstance(overlay, HeatLayer):
            parts.append('<g class="heat">')
            for i, intensity in enumerate(overlay.intensity):
                if intensity <= 0.0 or i >= len(positions):
                    continue
                x, y = positions[i]
                r = size * 0.035
                parts.append(
                    f'<circle cx="{_fmt(x * size)}" cy="{_fmt((1.0 - y) * size)}" r="{_fmt(r)}" '
                    f'fill="{_hex(pal.heat)}" fill-opacity="{intensity * 0.55:.3f}"/>'
                )
            parts.append("</g>")
    for overlay in overlays:
        if isinstance(overlay, MarkerLayer):
            parts.append('<g class="markers">')
            for m in overlay.markers:
                if m.file_index >= len(positions):
                    continue
                x, y = positions[m.file_index]
                r = size * 0.006 * m.magnitude
                parts.append(
                    f'<circle cx="{_fmt(x * size)}" cy="{_fmt((1.0 - y) * size)}" r="{_fmt(r)}" '
                    f'fill="{_hex(pal.marker)}" fill-opacity="0.75" stroke="#ffffff" stroke-width="1.0"/>'
                )
            parts.append("</g>")
    for overlay in overlays:
        if isinstance(overlay, FlowTree):
            parts.append('<g class="flow">')
            children: dict[int, list[int]] = {}
            for p, c in overlay.edges:
                children.setdefault(p, []).append(c)
            for p, c in overlay.edges:
                width = max(0.8, 2.2 * math.sqrt(overlay.nodes[c].flow))
                x1, y1 = overlay.nodes[p].pos
                x2, y2 = overlay.nodes[c].pos
                parts.append(
                    f'<line x1="{_fmt(x1 * size)}" y1="{_fmt((1.0 - y1) * size)}" '
                    f'x2="{_fmt(x2 * size)}" y2="{_fmt((1.0 - y2) * size)}" '
                    f'stroke="{_hex(pal.flow)}" stroke-opacity="0.7" stroke-width="{width:.2f}" '
                    f'stroke-linecap="round"/>'
                )
            for p, c in overlay.edges:
                width = max(0.8, 2.2 * math.sqrt(overlay.nodes[c].flow))
                if options.arrow_heads == "targets":
                    if c in children:  # not a leaf
                        continue
                    tri = _arrow_head(overlay.nodes[c].pos, overlay.nodes[p].pos, size, width)
                else:  # heads converge on the source
                    if p != 0:
                        continue
                    tri = _arrow_head(overlay.nodes[p].pos, overlay.nodes[c].pos, size, width)
                if tri:
                    parts.append(f'<polygon points="{tri}" fill="{_hex(pal.flow)}" fill-opacity="0.8"/>')
            parts.append("</g>")
    for overlay in overlays:
        if isinstance(overlay, dict) and overlay.get("kind") == "annotation":
            parts.append(
                f'<text x="{_fmt(size * 0.02)}" y="{_fmt(size * 0.04)}" font-family="sans-serif" '
                f'font-size="{_fmt(size * 0.022)}" fill="{_hex(pal.label)}">'
                f'{escape(overlay["text"])}</text>'
            )

    # 6. labels
    if model.labels.labels:
        parts.append('<g class="labels" font-family="sans-serif" text-anchor="middle">')
        for lb in model.labels.labels:
            color = pal.keyword if lb.kind == "keyword" else pal.label
            weight = ' font-weight="bold"' if lb.kind == "keyword" else ""
            parts.append(
                f'<text x="{_fmt(lb.x * size)}" y="{_fmt((1.0 - lb.y) * size)}" '
                f'font-size="{_fmt(lb.font_size * size)}" fill="{_hex(color)}" '
                f'fill-opacity="{lb.opacity:.3f}"{weight}>{escape(lb.text)}</text>'
            )
        parts.append("</g>")

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
