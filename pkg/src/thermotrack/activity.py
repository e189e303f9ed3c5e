"""Zone-based activity classification, per-minute series, daily reports.

Three labels: Sleeping (bed zone), Daily (table zone), NoActivity
(everything else, including minutes where no person was detected). Minutes
without a frame produce no series entry, so report durations always sum to
the day's coverage exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import date, datetime, timedelta

import numpy as np

from .zones import ZoneMap


class ActivityLabel(str, enum.Enum):
    SLEEPING = "Sleeping"
    DAILY = "Daily"
    NO_ACTIVITY = "NoActivity"


@dataclass(frozen=True)
class ActivityEntry:
    timestamp: datetime
    label: ActivityLabel
    present: bool  # a frame exists for this minute


@dataclass
class ActivitySeries:
    entries: list[ActivityEntry]

    def __post_init__(self):
        for a, b in zip(self.entries, self.entries[1:]):
            if a.timestamp >= b.timestamp:
                raise ValueError("series minutes not strictly increasing")


@dataclass(frozen=True)
class DailyReport:
    date: date
    sleeping_hours: float
    daily_hours: float
    none_hours: float
    coverage_minutes: int
    interrupted_sleep: bool = False


class EmptyInput(ValueError):
    pass


def classify(point, zones: ZoneMap) -> ActivityLabel:
    """Map an optional (x, y) to a label by closed zone containment."""
    if point is None:
        return ActivityLabel.NO_ACTIVITY
    x, y = point
    if zones.bed.contains(x, y):
        return ActivityLabel.SLEEPING
    if zones.table.contains(x, y):
        return ActivityLabel.DAILY
    return ActivityLabel.NO_ACTIVITY


def build_series(
    track: dict[datetime, tuple[float, float] | None], zones: ZoneMap
) -> ActivitySeries:
    """One labeled entry per minute that has a frame.

    ``track`` maps each covered minute to the selected person position, or
    None when the frame produced no person detection.
    """
    entries = [
        ActivityEntry(ts, classify(track[ts], zones), True) for ts in sorted(track)
    ]
    return ActivitySeries(entries)


def daily_report(
    series: ActivitySeries, day: date, min_block: int = 30, tz_offset_minutes: int = 0
) -> DailyReport:
    """Durations in hours per label for one calendar day of entries."""
    counts = {label: 0 for label in ActivityLabel}
    for e in series.entries:
        if (e.timestamp + timedelta(minutes=tz_offset_minutes)).date() != day:
            raise ValueError(f"entry {e.timestamp} outside day {day}")
        counts[e.label] += 1
    return DailyReport(
        date=day,
        sleeping_hours=counts[ActivityLabel.SLEEPING] / 60.0,
        daily_hours=counts[ActivityLabel.DAILY] / 60.0,
        none_hours=counts[ActivityLabel.NO_ACTIVITY] / 60.0,
        coverage_minutes=len(series.entries),
        interrupted_sleep=flag_interrupted(series, ActivityLabel.SLEEPING, min_block),
    )


def flag_interrupted(
    series: ActivitySeries, activity: ActivityLabel, min_block: int = 30
) -> bool:
    """True iff the activity splits into >= 2 long runs with a long gap.

    A run is a maximal set of consecutive minutes labeled with the activity
    (a missing frame breaks a run). Qualifying runs last >= min_block
    minutes; the flag requires two consecutive qualifying runs separated by
    >= min_block minutes of non-activity.
    """
    if min_block < 1:
        raise ValueError("min_block must be >= 1")
    minutes = sorted(
        int(e.timestamp.timestamp() // 60)
        for e in series.entries
        if e.label == activity
    )
    if not minutes:
        return False
    runs = []  # (start_minute, end_minute) inclusive
    start = prev = minutes[0]
    for m in minutes[1:]:
        if m == prev + 1:
            prev = m
        else:
            runs.append((start, prev))
            start = prev = m
    runs.append((start, prev))
    qualifying = [(s, e) for s, e in runs if e - s + 1 >= min_block]
    for (_, e1), (s2, _) in zip(qualifying, qualifying[1:]):
        if s2 - e1 - 1 >= min_block:
            return True
    return False


def summary_stats(reports: list[DailyReport]) -> dict[str, dict[str, float]]:
    """Descriptive statistics (hours) per activity across days.

    Quartiles use linear interpolation between order statistics.
    """
    if not reports:
        raise EmptyInput("no daily reports")
    columns = {
        "sleeping": np.array([r.sleeping_hours for r in reports]),
        "daily": np.array([r.daily_hours for r in reports]),
        "none": np.array([r.none_hours for r in reports]),
    }
    out = {}
    for name, vals in columns.items():
        out[name] = {
            "mean": float(vals.mean()),
            "median": float(np.percentile(vals, 50)),
            "q1": float(np.percentile(vals, 25)),
            "q3": float(np.percentile(vals, 75)),
            "min": float(vals.min()),
            "max": float(vals.max()),
        }
    return out


def format_stats_table(stats: dict[str, dict[str, float]]) -> str:
    fields = ["mean", "median", "q1", "q3", "min", "max"]
    lines = ["activity  " + "".join(f"{f:>8}" for f in fields)]
    for name in ("sleeping", "daily", "none"):
        row = stats[name]
        lines.append(f"{name:<10}" + "".join(f"{row[f]:8.2f}" for f in fields))
    return "\n".join(lines)


def write_series_csv(series: ActivitySeries, path) -> None:
    with open(path, "w") as f:
        f.write("timestamp,label\n")
        for e in series.entries:
            f.write(f"{e.timestamp.strftime('%Y-%m-%dT%H:%M:%SZ')},{e.label.value}\n")


def write_report_csv(reports: list[DailyReport], path) -> None:
    with open(path, "w") as f:
        f.write("date,sleeping_hours,daily_hours,none_hours,coverage_minutes,interrupted_sleep\n")
        for r in reports:
            f.write(
                f"{r.date.isoformat()},{r.sleeping_hours:.6f},{r.daily_hours:.6f},"
                f"{r.none_hours:.6f},{r.coverage_minutes},{str(r.interrupted_sleep).lower()}\n"
            )
