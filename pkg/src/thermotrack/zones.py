"""Axis-aligned zones on the native 16x12 sensor grid.

Coordinates are (x = column, y = row) with x in [0, 16) and y in [0, 12).
Containment is closed on all four edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

GRID_W = 16
GRID_H = 12


class ZoneError(ValueError):
    """Invalid zone geometry or zone configuration."""


@dataclass(frozen=True)
class ZoneRect:
    label: str
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not self.label:
            raise ZoneError("zone label must be non-empty")
        if not (self.x0 <= self.x1 and self.y0 <= self.y1):
            raise ZoneError(f"zone {self.label!r}: degenerate rectangle")
        if not (0 <= self.x0 and self.x1 < GRID_W and 0 <= self.y0 and self.y1 < GRID_H):
            raise ZoneError(f"zone {self.label!r}: outside the {GRID_W}x{GRID_H} grid")

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def overlaps(self, other: "ZoneRect") -> bool:
        return not (
            self.x1 < other.x0
            or other.x1 < self.x0
            or self.y1 < other.y0
            or other.y1 < self.y0
        )

    def to_dict(self) -> dict:
        return {"x0": self.x0, "y0": self.y0, "x1": self.x1, "y1": self.y1}


@dataclass(frozen=True)
class ZoneMap:
    """The two activity zones. They may not overlap."""

    bed: ZoneRect
    table: ZoneRect

    def __post_init__(self):
        if self.bed.overlaps(self.table):
            raise ZoneError("bed and table zones overlap")


def _rect_from_dict(d: dict, label: str) -> ZoneRect:
    try:
        return ZoneRect(label, float(d["x0"]), float(d["y0"]), float(d["x1"]), float(d["y1"]))
    except KeyError as exc:
        raise ZoneError(f"zone {label!r}: missing field {exc}") from exc


def load_zones(path) -> tuple[ZoneMap, list[ZoneRect]]:
    """Load a zones config file.

    Format: JSON object with "bed" and "table" rectangles and an optional
    "static" list of labeled rectangles (e.g. the heater).
    Returns (zone_map, static_zones).
    """
    data = json.loads(Path(path).read_text())
    for key in ("bed", "table"):
        if key not in data:
            raise ZoneError(f"zones config missing {key!r}")
    zmap = ZoneMap(_rect_from_dict(data["bed"], "bed"), _rect_from_dict(data["table"], "table"))
    static = []
    for i, entry in enumerate(data.get("static", [])):
        label = entry.get("label", f"static{i}")
        static.append(_rect_from_dict(entry, label))
    return zmap, static
