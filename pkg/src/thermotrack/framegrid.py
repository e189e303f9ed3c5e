"""2D frame reconstruction, grayscale conversion, and bilinear upsampling.

The 192-value row maps onto a 12-row x 16-column landscape grid: the row's
16 consecutive segments of 12 values become image columns, so
grid[r, c] == values[c * 12 + r].
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

import numpy as np

from .kernels import bilinear_resize

GRID_H = 12
GRID_W = 16
RENDER_W = 800
RENDER_H = 600


class WrongLength(ValueError):
    pass


class BadDimensions(ValueError):
    pass


@dataclass(frozen=True)
class ThermalFrame:
    timestamp: datetime | None
    grid: np.ndarray  # (12, 16) Celsius

    def flatten(self) -> np.ndarray:
        """Inverse of reshape: back to the 192-value row."""
        return self.grid.T.reshape(-1).copy()


@dataclass(frozen=True)
class GrayFrame:
    grid: np.ndarray  # intensities in [0, 255], native or interpolated size


def reshape(values, timestamp: datetime | None = None) -> ThermalFrame:
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    if v.shape[0] != GRID_H * GRID_W:
        raise WrongLength(f"expected {GRID_H * GRID_W} values, got {v.shape[0]}")
    if not np.isfinite(v).all():
        raise WrongLength("non-finite temperature in frame values")
    return ThermalFrame(timestamp, v.reshape(GRID_W, GRID_H).T.copy())


def to_gray(frame: ThermalFrame) -> GrayFrame:
    """Min/max normalize to [0, 255] integers; a constant frame maps to 0."""
    g = frame.grid
    tmin = g.min()
    tmax = g.max()
    if tmax == tmin:
        return GrayFrame(np.zeros_like(g))
    scaled = 255.0 * (g - tmin) / (tmax - tmin)
    return GrayFrame(np.floor(scaled + 0.5))  # round half up


def interpolate(gray: GrayFrame, width: int = RENDER_W, height: int = RENDER_H) -> GrayFrame:
    """Corner-aligned bilinear upsample for rendering."""
    h, w = gray.grid.shape
    if height < h or width < w:
        raise BadDimensions(f"target {width}x{height} smaller than source {w}x{h}")
    return GrayFrame(bilinear_resize(gray.grid, height, width))


def write_pgm(grid: np.ndarray, path) -> None:
    """Write a grayscale array (values in [0, 255]) as binary PGM (P5)."""
    data = np.floor(np.asarray(grid, dtype=np.float64) + 0.5)
    data = np.clip(data, 0, 255).astype(np.uint8)
    h, w = data.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(data.tobytes())
