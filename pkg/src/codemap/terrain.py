"""Digital elevation model: per-file Gaussian hills summed over a square grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .embedding import Layout

DEFAULT_RESOLUTION = 512
MIN_RESOLUTION = 16
DEFAULT_SEA_LEVEL = 0.1
MEDIAN_SIGMA = 0.02  # auto-calibration target, in map widths


@dataclass(frozen=True)
class ElevationGrid:
    resolution: int
    heights: np.ndarray  # (R, R) float64 in [0,1]; row 0 at the south edge
    sea_level: float

    def __post_init__(self):
        if self.resolution < MIN_RESOLUTION:
            raise ValueError(f"resolution must be >= {MIN_RESOLUTION}")
        if not 0.0 <= self.sea_level < 1.0:
            raise ValueError("sea level must lie in [0, 1)")
        h = np.ascontiguousarray(self.heights, dtype=np.float64)
        if h.shape != (self.resolution, self.resolution):
            raise ValueError("heights must be a resolution x resolution grid")
        h.flags.writeable = False
        object.__setattr__(self, "heights", h)


def file_sigmas(sizes: np.ndarray, sigma0: float | None) -> tuple[np.ndarray, float]:
    """Per-file Gaussian widths sigma_i = sigma0 * sqrt(max(size, 1)).

    With sigma0=None the factor is calibrated so the median width is 0.02 of
    the map side. Returns (sigmas, resolved sigma0).
    """
    sizes = np.maximum(np.asarray(sizes, dtype=np.float64), 1.0)
    roots = np.sqrt(sizes)
    if sigma0 is None:
        med = float(np.median(roots)) if roots.size else 1.0
        sigma0 = MEDIAN_SIGMA / med if med > 0.0 else MEDIAN_SIGMA
    return sigma0 * roots, float(sigma0)


def gaussian_field(layout: Layout, sizes: np.ndarray, resolution: int, sigma0: float | None):
    """Unnormalized elevation field h(p) = sum_i exp(-|p - x_i|^2 / (2 sigma_i^2)).

    Returns (field, resolved sigma0). The grid is sampled at cell centers.
    """
    pos = layout.positions
    if pos.shape[0] == 0:
        return np.zeros((resolution, resolution), dtype=np.float64), sigma0 if sigma0 is not None else MEDIAN_SIGMA
    sigmas, sigma0 = file_sigmas(sizes, sigma0)
    field = _kernels.gaussian_field(pos[:, 0], pos[:, 1], sigmas, resolution)
    return field, sigma0


def build_elevation(
    layout: Layout,
    sizes: np.ndarray,
    resolution: int = DEFAULT_RESOLUTION,
    sigma0: float | None = None,
    sea_level: float = DEFAULT_SEA_LEVEL,
) -> tuple[ElevationGrid, float]:
    """Elevation grid scaled so the highest cell is exactly 1 (empty corpus: all zero)."""
    field, sigma0 = gaussian_field(layout, sizes, resolution, sigma0)
    peak = float(field.max()) if field.size else 0.0
    if peak > 0.0:
        field = field / peak
    return ElevationGrid(resolution=resolution, heights=field, sea_level=sea_level), sigma0


def sea_mask(grid: ElevationGrid, level: float | None = None) -> np.ndarray:
    """Boolean land mask: a cell is land iff its height reaches the given level."""
    if level is None:
        level = grid.sea_level
    if not 0.0 <= level < 1.0:
        raise ValueError("sea level must lie in [0, 1)")
    return grid.heights >= level
