"""Bivariate spatial distribution of person positions and its renderings.

Positions are binned onto the native 16x12 sensor grid (cell = floor of the
coordinate, far boundary clamped to the last cell). The log-normalized
image ln(1+count)/ln(1+max) compresses dynamic range while preserving the
count ordering, so heatmaps from different days are directly comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .framegrid import write_pgm
from .kernels import bilinear_resize
from .zones import GRID_H, GRID_W


class OutOfBounds(ValueError):
    pass


class EmptyDistribution(ValueError):
    pass


@dataclass(frozen=True)
class SpatialDistribution:
    counts: np.ndarray  # (12, 16) int64 visit counts
    mass: np.ndarray  # (12, 16) probabilities; all-zero when empty
    marginal_x: np.ndarray  # (16,)
    marginal_y: np.ndarray  # (12,)
    empty: bool


@dataclass(frozen=True)
class HeatmapImage:
    grid: np.ndarray  # intensities in [0, 1]


def histogram(points) -> SpatialDistribution:
    """Bin (x, y) points to grid cells and normalize to probabilities."""
    counts = np.zeros((GRID_H, GRID_W), dtype=np.int64)
    for x, y in points:
        if not (0 <= x <= GRID_W and 0 <= y <= GRID_H):
            raise OutOfBounds(f"point ({x}, {y}) outside [0,{GRID_W}]x[0,{GRID_H}]")
        c = min(int(np.floor(x)), GRID_W - 1)
        r = min(int(np.floor(y)), GRID_H - 1)
        counts[r, c] += 1
    total = counts.sum()
    if total == 0:
        zero = np.zeros((GRID_H, GRID_W))
        return SpatialDistribution(counts, zero, np.zeros(GRID_W), np.zeros(GRID_H), True)
    mass = counts / total
    return SpatialDistribution(counts, mass, mass.sum(axis=0), mass.sum(axis=1), False)


def log_normalize(dist: SpatialDistribution) -> HeatmapImage:
    """Intensity = ln(1+count) / ln(1+max_count); all-zero counts stay zero."""
    max_count = dist.counts.max()
    if max_count == 0:
        return HeatmapImage(np.zeros_like(dist.counts, dtype=np.float64))
    return HeatmapImage(np.log1p(dist.counts) / np.log1p(max_count))


def compare_days(a: SpatialDistribution, b: SpatialDistribution) -> float:
    """Total variation distance between two day distributions, in [0, 1]."""
    if a.counts.shape != b.counts.shape:
        raise ValueError("distribution grids differ in shape")
    if a.empty or b.empty:
        raise EmptyDistribution("cannot compare an empty distribution")
    return float(0.5 * np.abs(a.mass - b.mass).sum())


def render(image: HeatmapImage, path, upsample: tuple[int, int] | None = None,
           png_path=None) -> None:
    """Write the heatmap as PGM (and optionally PNG), 0..255 grayscale.

    ``upsample`` is (width, height) for bilinear enlargement, e.g. (800, 600).
    """
    grid = image.grid * 255.0
    if upsample is not None:
        width, height = upsample
        grid = bilinear_resize(grid, height, width)
    write_pgm(grid, path)
    if png_path is not None:
        from PIL import Image

        data = np.clip(np.floor(grid + 0.5), 0, 255).astype(np.uint8)
        Image.fromarray(data, mode="L").save(png_path)


def write_distribution_csv(dist: SpatialDistribution, path) -> None:
    with open(path, "w") as f:
        f.write("row,col,count,mass\n")
        for r in range(dist.counts.shape[0]):
            for c in range(dist.counts.shape[1]):
                f.write(f"{r},{c},{dist.counts[r, c]},{dist.mass[r, c]:.9f}\n")


def write_marginals_csv(dist: SpatialDistribution, path) -> None:
    with open(path, "w") as f:
        f.write("axis,index,mass\n")
        for c, m in enumerate(dist.marginal_x):
            f.write(f"x,{c},{m:.9f}\n")
        for r, m in enumerate(dist.marginal_y):
            f.write(f"y,{r},{m:.9f}\n")
