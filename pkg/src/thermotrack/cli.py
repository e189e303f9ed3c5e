"""Command-line interface.

Subcommands: coverage, report, heatmap, simulate, validate.
Exit codes: 0 success, 1 input/parse error, 2 validation failure.
Diagnostics go to stderr; data goes to files under --out.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import ingest, pipeline, synth
from .blobdetect import DetectConfig, ThresholdMethod
from .ingest import IngestError, RawRecording
from .zones import ZoneError, load_zones


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--frames", required=True, help="frames CSV (192 fields per line)")
    p.add_argument("--timestamps", required=True, help="ISO-8601 timestamps, one per line")
    p.add_argument("--tz-offset-minutes", type=int, default=0,
                   help="fixed offset applied before day bucketing (default UTC)")
    p.add_argument("--out", required=True, help="output directory")


def _add_detect_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--zones", required=True, help="zones config JSON (bed/table/static)")
    p.add_argument("--static-zones", action="store_true", default=True,
                   help="apply the config's static zones (default on)")
    p.add_argument("--no-static-zones", dest="static_zones", action="store_false",
                   help="ignore the config's static zones")
    p.add_argument("--threshold", default="otsu", help="otsu or fixed:<t> (default otsu)")
    p.add_argument("--min-area", type=int, default=2, help="minimum blob area in cells")
    p.add_argument("--morphology", action="store_true",
                   help="apply 3x3-cross opening before labeling")


def _detect_config(args) -> DetectConfig:
    return DetectConfig(
        method=ThresholdMethod.parse(args.threshold),
        min_area=args.min_area,
        morphology=args.morphology,
    )


def _run_full(args):
    zones, static = load_zones(args.zones)
    if not args.static_zones:
        static = []
    rec = RawRecording(Path(args.timestamps), Path(args.frames))
    return pipeline.run_pipeline(
        rec, zones, static, _detect_config(args), args.tz_offset_minutes
    )


def cmd_coverage(args) -> int:
    rec = RawRecording(Path(args.timestamps), Path(args.frames))
    series = ingest.parse_recording(rec)
    coverage = ingest.day_coverage(series, args.tz_offset_minutes)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    pipeline.atomic_write(outdir / "coverage.csv",
                          lambda p: ingest.write_coverage_csv(coverage, p))
    retained = sum(c.retained for c in coverage)
    dropped = len(coverage) - retained
    frac = 100.0 * dropped / len(coverage) if coverage else 0.0
    if coverage:
        print(f"{retained} retained / {dropped} dropped ({frac:.1f}%)")
    else:
        print("0 days")
    return 0


def cmd_report(args) -> int:
    result = _run_full(args)
    pipeline.write_outputs(result, args.out)
    if result.stats is not None:
        from .activity import format_stats_table

        print(format_stats_table(result.stats))
    return 0


def cmd_heatmap(args) -> int:
    result = _run_full(args)
    if args.day != "all":
        from datetime import date

        wanted = date.fromisoformat(args.day)
        if wanted not in result.days:
            print(f"error: day {args.day} not in retained days", file=sys.stderr)
            return 1
        result.days = {wanted: result.days[wanted]}
    upsample = (800, 600) if args.upsample else None
    pipeline.write_outputs(result, args.out, heatmap_upsample=upsample, png=args.png)
    for day, dres in sorted(result.days.items()):
        if dres.distribution.empty:
            print(f"warning: {day} has no person detections; heatmap is blank",
                  file=sys.stderr)
    return 0


def cmd_simulate(args) -> int:
    scenario = synth.load_scenario(args.scenario)
    rec, _ = synth.emit(scenario, args.out)
    print(f"wrote {rec.frames_path} and {rec.timestamp_path}")
    return 0


def cmd_validate(args) -> int:
    scenario = synth.load_scenario(args.scenario)
    report = synth.validate(scenario, args.out)
    print(report.summary())
    return 0 if report.passed else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermotrack",
        description="Thermal-array occupancy pipeline: coverage, activity "
                    "reports, spatial heatmaps, and synthetic-scenario tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coverage", help="per-day minute counts and the 12-hour filter")
    _add_input_flags(p)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("report", help="activity series, daily reports, statistics")
    _add_input_flags(p)
    _add_detect_flags(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("heatmap", help="spatial distributions, heatmaps, scatters")
    _add_input_flags(p)
    _add_detect_flags(p)
    p.add_argument("--day", default="all", help="ISO date or 'all' (default)")
    p.add_argument("--upsample", action="store_true", help="render heatmaps at 800x600")
    p.add_argument("--png", action="store_true", help="also write PNG next to each PGM")
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("simulate", help="emit a synthetic recording from a scenario")
    p.add_argument("scenario", help="scenario config JSON")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="emit, run the pipeline, score vs ground truth")
    p.add_argument("scenario", help="scenario config JSON")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IngestError, ZoneError, synth.InvalidScenario, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
