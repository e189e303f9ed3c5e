"""End-to-end pipeline: raw files -> detections -> track -> reports -> maps.

Shared by the CLI subcommands and by the synthetic-scenario validator so
both exercise exactly the same code path.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from pathlib import Path

from . import activity, blobdetect, ingest, spatial, tracking
from .blobdetect import DetectConfig
from .framegrid import reshape
from .zones import ZoneMap, ZoneRect


@dataclass
class DayResult:
    date: date
    detections: list  # (timestamp, list of Blob)
    track: tracking.CentroidTrack
    person: dict  # timestamp -> (x, y) or None, one key per covered minute
    series: activity.ActivitySeries
    report: activity.DailyReport
    distribution: spatial.SpatialDistribution
    heatmap: spatial.HeatmapImage


@dataclass
class PipelineResult:
    coverage: list[ingest.DayCoverage]
    days: dict  # date -> DayResult, retained days only
    stats: dict | None = None


def run_pipeline(
    rec: ingest.RawRecording,
    zones: ZoneMap,
    static_zones: list[ZoneRect] | None = None,
    detect_cfg: DetectConfig = DetectConfig(),
    tz_offset_minutes: int = 0,
    min_block: int = 30,
) -> PipelineResult:
    series = ingest.parse_recording(rec)
    coverage = ingest.day_coverage(series, tz_offset_minutes)
    retained = ingest.filter_retained(series, coverage, tz_offset_minutes)
    return run_pipeline_on_series(
        retained, coverage, zones, static_zones, detect_cfg, tz_offset_minutes, min_block
    )


def run_pipeline_on_series(
    retained: ingest.FrameSeries,
    coverage: list[ingest.DayCoverage],
    zones: ZoneMap,
    static_zones: list[ZoneRect] | None = None,
    detect_cfg: DetectConfig = DetectConfig(),
    tz_offset_minutes: int = 0,
    min_block: int = 30,
) -> PipelineResult:
    static_zones = static_zones or []
    offset = timedelta(minutes=tz_offset_minutes)

    by_day: dict[date, list[int]] = {}
    for i, ts in enumerate(retained.timestamps):
        by_day.setdefault((ts + offset).date(), []).append(i)

    days: dict[date, DayResult] = {}
    for day in sorted(by_day):
        idx = by_day[day]
        detections = [
            (retained.timestamps[i], blobdetect.detect(reshape(retained.values[i]), detect_cfg))
            for i in idx
        ]
        track = tracking.exclude_static(detections, static_zones)
        selected = tracking.select_person(track)
        person = {retained.timestamps[i]: selected.get(retained.timestamps[i]) for i in idx}
        ser = activity.build_series(person, zones)
        report = activity.daily_report(ser, day, min_block, tz_offset_minutes)
        dist = spatial.histogram([p for p in person.values() if p is not None])
        days[day] = DayResult(
            date=day,
            detections=detections,
            track=track,
            person=person,
            series=ser,
            report=report,
            distribution=dist,
            heatmap=spatial.log_normalize(dist),
        )

    result = PipelineResult(coverage=coverage, days=days)
    reports = [d.report for d in days.values()]
    if reports:
        result.stats = activity.summary_stats(reports)
    return result


def atomic_write(path: Path, writer) -> None:
    """Write via temp file + rename so readers never see partial output."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    writer(tmp)
    os.replace(tmp, path)


def write_person_track_csv(day: DayResult, path) -> None:
    """Selected per-minute person positions (the track behind the reports)."""
    with open(path, "w") as f:
        f.write("timestamp,x,y\n")
        for ts in sorted(day.person):
            p = day.person[ts]
            if p is not None:
                f.write(f"{ts.strftime('%Y-%m-%dT%H:%M:%SZ')},{p[0]:.6f},{p[1]:.6f}\n")


def write_outputs(result: PipelineResult, outdir, heatmap_upsample=None, png=False) -> list[Path]:
    """Emit all per-day and summary files under ``outdir``; returns paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(path, writer):
        atomic_write(path, writer)
        written.append(path)

    emit(outdir / "coverage.csv", lambda p: ingest.write_coverage_csv(result.coverage, p))

    reports = []
    prev_key = None
    comparisons = []
    for day, dres in sorted(result.days.items()):
        tag = day.isoformat()
        reports.append(dres.report)
        emit(outdir / f"scatter_{tag}.csv", lambda p, d=dres: tracking.write_scatter_csv(d.track, p))
        emit(outdir / f"track_{tag}.csv", lambda p, d=dres: write_person_track_csv(d, p))
        emit(outdir / f"activity_{tag}.csv", lambda p, d=dres: activity.write_series_csv(d.series, p))
        emit(outdir / f"distribution_{tag}.csv",
             lambda p, d=dres: spatial.write_distribution_csv(d.distribution, p))
        emit(outdir / f"marginals_{tag}.csv",
             lambda p, d=dres: spatial.write_marginals_csv(d.distribution, p))
        emit(outdir / f"heatmap_{tag}.pgm",
             lambda p, d=dres: spatial.render(
                 d.heatmap, p, upsample=heatmap_upsample,
                 png_path=str(p).removesuffix(".pgm") + ".png" if png else None))
        if prev_key is not None:
            a = result.days[prev_key].distribution
            b = dres.distribution
            if not (a.empty or b.empty):
                comparisons.append((prev_key, day, spatial.compare_days(a, b)))
        prev_key = day

    emit(outdir / "reports.csv", lambda p: activity.write_report_csv(reports, p))
    if result.stats is not None:
        emit(outdir / "stats.txt",
             lambda p: Path(p).write_text(activity.format_stats_table(result.stats) + "\n"))
    if comparisons:
        def write_cmp(p):
            with open(p, "w") as f:
                f.write("day_a,day_b,tv_distance\n")
                for a, b, d in comparisons:
                    f.write(f"{a.isoformat()},{b.isoformat()},{d:.9f}\n")
        emit(outdir / "comparisons.csv", write_cmp)
    return written
