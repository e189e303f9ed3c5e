"""Warm-blob detection: threshold, connected components, centroids.

Detection runs on the native 16x12 grid. Blob coordinates are (x = column,
y = row); centroids are arithmetic means of member cell coordinates and so
carry sub-cell precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .framegrid import GrayFrame, ThermalFrame, to_gray
from .kernels import label_components, otsu_threshold


@dataclass(frozen=True)
class BinaryFrame:
    grid: np.ndarray  # bool mask, warm = True


@dataclass(frozen=True)
class Blob:
    pixels: frozenset  # of (col, row)
    area: int
    centroid: tuple  # (x, y), fractional
    bbox: tuple  # (col_min, row_min, col_max, row_max)


@dataclass(frozen=True)
class ThresholdMethod:
    """Otsu by default; ``ThresholdMethod.fixed(t)`` for a manual cut."""

    kind: str = "otsu"
    value: int = 0

    @classmethod
    def otsu(cls) -> "ThresholdMethod":
        return cls("otsu")

    @classmethod
    def fixed(cls, t: int) -> "ThresholdMethod":
        return cls("fixed", int(t))

    @classmethod
    def parse(cls, text: str) -> "ThresholdMethod":
        if text == "otsu":
            return cls.otsu()
        if text.startswith("fixed:"):
            return cls.fixed(int(text.split(":", 1)[1]))
        raise ValueError(f"bad threshold spec {text!r} (use 'otsu' or 'fixed:<t>')")


@dataclass(frozen=True)
class DetectConfig:
    method: ThresholdMethod = field(default_factory=ThresholdMethod.otsu)
    min_area: int = 2
    morphology: bool = False


# 3x3 cross structuring element for the optional opening
_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


def threshold(gray: GrayFrame, method: ThresholdMethod) -> BinaryFrame:
    """Binarize: warm iff intensity strictly greater than the threshold.

    Otsu maximizes between-class variance over the 256-bin histogram; a
    degenerate histogram (fewer than two occupied bins) yields an all-cold
    mask.
    """
    g = gray.grid
    if method.kind == "fixed":
        t = method.value
    else:
        hist = np.bincount(g.astype(np.int64).reshape(-1), minlength=256)[:256]
        t = otsu_threshold(hist)
        if t < 0:
            return BinaryFrame(np.zeros(g.shape, dtype=bool))
    return BinaryFrame(g > t)


def _erode(mask: np.ndarray) -> np.ndarray:
    padded = np.pad(mask, 1, constant_values=False)
    out = np.ones_like(mask)
    h, w = mask.shape
    for dr, dc in ((0, 1), (1, 0), (1, 1), (1, 2), (2, 1)):
        out &= padded[dr : dr + h, dc : dc + w]
    return out


def _dilate(mask: np.ndarray) -> np.ndarray:
    padded = np.pad(mask, 1, constant_values=False)
    out = np.zeros_like(mask)
    h, w = mask.shape
    for dr, dc in ((0, 1), (1, 0), (1, 1), (1, 2), (2, 1)):
        out |= padded[dr : dr + h, dc : dc + w]
    return out


def opening(mask: BinaryFrame) -> BinaryFrame:
    """Morphological opening with the 3x3 cross: erosion then dilation."""
    return BinaryFrame(_dilate(_erode(mask.grid)))


def connected_components(mask: BinaryFrame, min_area: int = 1) -> list[Blob]:
    """8-connected warm components with area >= min_area.

    Blobs are ordered by (bbox min row, bbox min col), ties by first pixel in
    row-major order.
    """
    if min_area < 1:
        raise ValueError("min_area must be >= 1")
    labels, count = label_components(mask.grid)
    blobs = []
    for lab in range(1, count + 1):
        rows, cols = np.nonzero(labels == lab)
        area = rows.size
        if area < min_area:
            continue
        blobs.append(
            Blob(
                pixels=frozenset(zip(cols.tolist(), rows.tolist())),
                area=int(area),
                centroid=(float(cols.mean()), float(rows.mean())),
                bbox=(int(cols.min()), int(rows.min()), int(cols.max()), int(rows.max())),
            )
        )
    blobs.sort(key=lambda b: (b.bbox[1], b.bbox[0], min(p[1] * mask.grid.shape[1] + p[0] for p in b.pixels)))
    return blobs


def detect(frame: ThermalFrame, cfg: DetectConfig = DetectConfig()) -> list[Blob]:
    """Full per-frame pipeline: gray, threshold, optional opening, components."""
    mask = threshold(to_gray(frame), cfg.method)
    if cfg.morphology:
        mask = opening(mask)
    return connected_components(mask, cfg.min_area)


def write_blob_csv(per_frame: list, path) -> None:
    """``per_frame``: list of (timestamp, list of Blob)."""
    with open(path, "w") as f:
        f.write("timestamp,blob_index,area,centroid_x,centroid_y\n")
        for ts, blobs in per_frame:
            for i, b in enumerate(blobs):
                f.write(
                    f"{ts.strftime('%Y-%m-%dT%H:%M:%SZ')},{i},{b.area},"
                    f"{b.centroid[0]:.6f},{b.centroid[1]:.6f}\n"
                )
