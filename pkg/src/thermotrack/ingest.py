"""Ingest the two-file raw recording format.

A recording is a pair of text files with matching line counts:

- frames file: CSV, one line per sample, 192 temperature fields in Celsius
  (up to 2 fractional digits);
- timestamps file: one ISO-8601 UTC timestamp per line.

Line i of each file describes the same per-minute capture.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from pathlib import Path

import numpy as np
import pandas as pd

FRAME_VALUES = 192
TEMP_MIN = -40.0
TEMP_MAX = 300.0
MINUTES_PER_DAY = 1440
RETAIN_THRESHOLD_MINUTES = 720  # 12 of 24 hours


class IngestError(ValueError):
    """Base class for recording ingest failures."""


class LineCountMismatch(IngestError):
    pass


class ParseError(IngestError):
    def __init__(self, message: str, line: int, field: int | None = None):
        loc = f"line {line}" + ("" if field is None else f", field {field}")
        super().__init__(f"{message} ({loc})")
        self.line = line
        self.field = field


class NonFiniteTemperature(IngestError):
    pass


class TemperatureOutOfRange(IngestError):
    pass


@dataclass(frozen=True)
class RawRecording:
    timestamp_path: Path
    frames_path: Path


@dataclass
class FrameSeries:
    """Timestamped per-minute frames: timestamps[i] pairs with values[i]."""

    timestamps: list[datetime]  # UTC, minute resolution, strictly increasing
    values: np.ndarray  # shape (n, 192), float64, Celsius

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1, FRAME_VALUES)
        if len(self.timestamps) != self.values.shape[0]:
            raise IngestError("timestamp / frame count mismatch")
        if not np.isfinite(self.values).all():
            raise NonFiniteTemperature("frame contains a non-finite temperature")
        if self.values.size and (
            self.values.min() < TEMP_MIN or self.values.max() > TEMP_MAX
        ):
            raise TemperatureOutOfRange(
                f"temperature outside plausible range [{TEMP_MIN}, {TEMP_MAX}] C"
            )
        for a, b in zip(self.timestamps, self.timestamps[1:]):
            if a >= b:
                raise IngestError("timestamps not strictly increasing")

    def __len__(self) -> int:
        return len(self.timestamps)


@dataclass(frozen=True)
class DayCoverage:
    date: date
    minutes_present: int
    retained: bool


def _parse_timestamp(text: str, line_no: int) -> datetime:
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(raw)
    except ValueError as exc:
        raise ParseError(f"bad timestamp {text.strip()!r}", line_no) from exc
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    else:
        ts = ts.astimezone(timezone.utc)
    return ts.replace(second=0, microsecond=0)


def _read_lines(path: Path) -> list[str]:
    text = Path(path).read_text()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _diagnose_frame_line(line: str, line_no: int):
    """Slow path: locate the offending field of a bad frames line."""
    fields = line.split(",")
    if len(fields) != FRAME_VALUES:
        raise ParseError(f"expected {FRAME_VALUES} fields, got {len(fields)}", line_no)
    for j, field in enumerate(fields):
        try:
            float(field)
        except ValueError:
            raise ParseError(f"bad temperature {field.strip()!r}", line_no, field=j)


def parse_recording(rec: RawRecording) -> FrameSeries:
    """Parse and merge the two files into a timestamp-sorted FrameSeries.

    Samples are sorted by timestamp; exact duplicate timestamps are collapsed
    keeping the first occurrence in file order.
    """
    ts_lines = _read_lines(rec.timestamp_path)
    frame_lines = _read_lines(rec.frames_path)
    if len(ts_lines) != len(frame_lines):
        raise LineCountMismatch(
            f"{rec.timestamp_path} has {len(ts_lines)} lines but "
            f"{rec.frames_path} has {len(frame_lines)}"
        )
    n = len(ts_lines)
    if n == 0:
        return FrameSeries([], np.empty((0, FRAME_VALUES)))

    timestamps = [_parse_timestamp(line, i + 1) for i, line in enumerate(ts_lines)]

    # fast path via pandas; fall back to per-line diagnosis on failure
    for i, line in enumerate(frame_lines):
        if line.count(",") != FRAME_VALUES - 1:
            _diagnose_frame_line(line, i + 1)
    try:
        values = pd.read_csv(
            io.StringIO("\n".join(frame_lines)),
            header=None,
            dtype=np.float64,
        ).to_numpy()
    except (ValueError, pd.errors.ParserError):
        for i, line in enumerate(frame_lines):
            _diagnose_frame_line(line, i + 1)
        raise  # diagnosis found nothing; re-raise the fast-path error
    if values.shape[1] != FRAME_VALUES:
        raise ParseError(f"expected {FRAME_VALUES} fields", 1)
    if not np.isfinite(values).all():
        bad = np.argwhere(~np.isfinite(values))[0]
        raise NonFiniteTemperature(
            f"non-finite temperature at line {bad[0] + 1}, field {bad[1]}"
        )

    order = sorted(range(n), key=lambda i: (timestamps[i], i))
    keep = []
    last_ts = None
    for i in order:
        if timestamps[i] != last_ts:
            keep.append(i)
            last_ts = timestamps[i]
    return FrameSeries([timestamps[i] for i in keep], values[keep])


def _day_of(ts: datetime, tz_offset_minutes: int) -> date:
    return (ts + timedelta(minutes=tz_offset_minutes)).date()


def day_coverage(series: FrameSeries, tz_offset_minutes: int = 0) -> list[DayCoverage]:
    """Per-day distinct-minute counts over the full date span of the series.

    Days inside the span with no samples still get an entry with
    minutes_present=0. A day is retained iff it has >= 720 minutes (12 h).
    """
    if len(series) == 0:
        return []
    per_day: dict[date, set] = {}
    for ts in series.timestamps:
        per_day.setdefault(_day_of(ts, tz_offset_minutes), set()).add(
            ts.hour * 60 + ts.minute
        )
    first = min(per_day)
    last = max(per_day)
    out = []
    d = first
    while d <= last:
        minutes = len(per_day.get(d, ()))
        out.append(DayCoverage(d, minutes, minutes >= RETAIN_THRESHOLD_MINUTES))
        d += timedelta(days=1)
    return out


def filter_retained(
    series: FrameSeries, coverage: list[DayCoverage], tz_offset_minutes: int = 0
) -> FrameSeries:
    """Keep only the samples belonging to retained days, order preserved."""
    retained_days = {c.date for c in coverage if c.retained}
    idx = [
        i
        for i, ts in enumerate(series.timestamps)
        if _day_of(ts, tz_offset_minutes) in retained_days
    ]
    return FrameSeries([series.timestamps[i] for i in idx], series.values[idx])


def write_coverage_csv(coverage: list[DayCoverage], path) -> None:
    with open(path, "w") as f:
        f.write("date,minutes_present,retained\n")
        for c in coverage:
            f.write(f"{c.date.isoformat()},{c.minutes_present},{str(c.retained).lower()}\n")
