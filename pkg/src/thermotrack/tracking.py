"""Separate the person's centroids from static heat sources (e.g. heater).

Static sources are declared as zones; ``suggest_static_zones`` can propose
candidates but the suggestion is never applied automatically, because a
sleeping person is also nearly static.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

import numpy as np

from .blobdetect import Blob
from .zones import GRID_H, GRID_W, ZoneRect


@dataclass(frozen=True)
class TrackPoint:
    timestamp: datetime
    x: float
    y: float
    area: int


@dataclass(frozen=True)
class ExcludedPoint:
    timestamp: datetime
    x: float
    y: float
    reason: str


@dataclass
class CentroidTrack:
    points: list[TrackPoint] = field(default_factory=list)
    excluded: list[ExcludedPoint] = field(default_factory=list)


def exclude_static(
    detections: list[tuple[datetime, list[Blob]]], static_zones: list[ZoneRect]
) -> CentroidTrack:
    """Partition centroids: inside any static zone -> excluded, else kept.

    Containment is closed; the first matching zone (config order) names the
    exclusion reason.
    """
    track = CentroidTrack()
    for ts, blobs in detections:
        for b in blobs:
            x, y = b.centroid
            zone = next((z for z in static_zones if z.contains(x, y)), None)
            if zone is None:
                track.points.append(TrackPoint(ts, x, y, b.area))
            else:
                track.excluded.append(ExcludedPoint(ts, x, y, zone.label))
    return track


def suggest_static_zones(
    detections: list[tuple[datetime, list[Blob]]],
    presence_fraction: float = 0.9,
    cell_radius: int = 1,
) -> list[ZoneRect]:
    """Propose zones around cells that hold a centroid in most frames.

    A cell qualifies when it contains a centroid in >= presence_fraction of
    all frames; qualifying cells are dilated by cell_radius and overlapping
    rectangles merged. Candidates only - review before applying.
    """
    if not (0 < presence_fraction <= 1):
        raise ValueError("presence_fraction must be in (0, 1]")
    n_frames = len(detections)
    if n_frames == 0:
        return []
    hits = np.zeros((GRID_H, GRID_W), dtype=np.int64)
    for _, blobs in detections:
        cells = {
            (min(int(b.centroid[0]), GRID_W - 1), min(int(b.centroid[1]), GRID_H - 1))
            for b in blobs
        }
        for cx, cy in cells:
            hits[cy, cx] += 1
    rects = []
    for r, c in zip(*np.nonzero(hits >= presence_fraction * n_frames)):
        rects.append(
            [
                max(c - cell_radius, 0),
                max(r - cell_radius, 0),
                min(c + cell_radius, GRID_W - 1),
                min(r + cell_radius, GRID_H - 1),
            ]
        )
    # merge overlapping rectangles until stable
    merged = True
    while merged:
        merged = False
        out: list[list[int]] = []
        for rect in rects:
            for other in out:
                if not (
                    rect[2] < other[0]
                    or other[2] < rect[0]
                    or rect[3] < other[1]
                    or other[3] < rect[1]
                ):
                    other[0] = min(other[0], rect[0])
                    other[1] = min(other[1], rect[1])
                    other[2] = max(other[2], rect[2])
                    other[3] = max(other[3], rect[3])
                    merged = True
                    break
            else:
                out.append(rect)
        rects = out
    rects.sort()
    return [
        ZoneRect(f"static{i}", float(x0), float(y0), float(x1), float(y1))
        for i, (x0, y0, x1, y1) in enumerate(rects)
    ]


def select_person(track: CentroidTrack) -> dict[datetime, tuple[float, float]]:
    """Pick one centroid per minute: the largest-area blob, ties by (y, x)."""
    by_minute: dict[datetime, list[TrackPoint]] = {}
    for p in track.points:
        by_minute.setdefault(p.timestamp, []).append(p)
    out = {}
    for ts, pts in by_minute.items():
        best = min(pts, key=lambda p: (-p.area, p.y, p.x))
        out[ts] = (best.x, best.y)
    return out


def write_scatter_csv(track: CentroidTrack, path) -> None:
    rows = [(p.timestamp, p.x, p.y, "person") for p in track.points] + [
        (p.timestamp, p.x, p.y, f"excluded:{p.reason}") for p in track.excluded
    ]
    rows.sort(key=lambda r: (r[0], r[3], r[1], r[2]))
    with open(path, "w") as f:
        f.write("timestamp,x,y,status\n")
        for ts, x, y, status in rows:
            f.write(f"{ts.strftime('%Y-%m-%dT%H:%M:%SZ')},{x:.6f},{y:.6f},{status}\n")
