"""Synthetic recording generator with exact ground truth.

A Scenario describes room geometry, an occupant schedule, an optional
heater, and a noise model. ``emit`` renders it to the two-file raw format
and records per-minute ground truth, so the whole pipeline can be checked
against known answers. Generation is deterministic: per-day RNG streams are
derived from (seed, day), so identical scenarios produce byte-identical
files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date, datetime, time, timedelta, timezone
from pathlib import Path

import numpy as np

from . import pipeline as pl
from .activity import ActivityLabel
from .blobdetect import DetectConfig
from .ingest import MINUTES_PER_DAY, RETAIN_THRESHOLD_MINUTES, RawRecording
from .zones import GRID_H, GRID_W, ZoneMap, ZoneRect


class InvalidScenario(ValueError):
    pass


class MissingOutput(RuntimeError):
    pass


@dataclass(frozen=True)
class ScheduleEntry:
    activity: ActivityLabel
    start: int  # minute of day, inclusive
    end: int  # minute of day, exclusive
    anchor: tuple  # (x, y) inside the matching zone


@dataclass(frozen=True)
class HeaterSpec:
    zone: ZoneRect
    temperature: float
    duty: tuple = ((0, MINUTES_PER_DAY),)  # on-intervals per day, [start, end)

    def on_at(self, minute: int) -> bool:
        return any(s <= minute < e for s, e in self.duty)


@dataclass
class Scenario:
    days: int
    zones: ZoneMap
    schedule: list  # per-day list of ScheduleEntry, len == days
    start_date: date = date(2024, 4, 7)
    heater: HeaterSpec | None = None
    ambient: float = 20.0
    body_peak: float = 34.0
    body_radius: float = 2.0
    noise_sd: float = 0.0
    jitter: float = 0.5  # max per-axis anchor wobble, cells
    seed: int = 0
    sparse_days: frozenset = frozenset()
    sparse_coverage: int = 360  # emitted minutes on a sparse day

    def __post_init__(self):
        if self.days < 1 or len(self.schedule) != self.days:
            raise InvalidScenario("schedule must list exactly one entry list per day")
        if self.body_peak <= self.ambient + 6 * self.noise_sd:
            raise InvalidScenario("body_peak too close to ambient for the noise level")
        if not 0 <= self.sparse_coverage < RETAIN_THRESHOLD_MINUTES:
            raise InvalidScenario("sparse_coverage must be below the retention threshold")
        if any(not 0 <= d < self.days for d in self.sparse_days):
            raise InvalidScenario("sparse day index out of range")
        for day_sched in self.schedule:
            prev_end = None
            for entry in sorted(day_sched, key=lambda e: e.start):
                if not 0 <= entry.start < entry.end <= MINUTES_PER_DAY:
                    raise InvalidScenario(f"bad interval [{entry.start}, {entry.end})")
                if prev_end is not None and entry.start < prev_end:
                    raise InvalidScenario("schedule intervals overlap")
                prev_end = entry.end
                zone = self._zone_for(entry.activity)
                if zone is not None and not zone.contains(*entry.anchor):
                    raise InvalidScenario(
                        f"anchor {entry.anchor} outside {zone.label} zone"
                    )

    def _zone_for(self, label: ActivityLabel):
        if label == ActivityLabel.SLEEPING:
            return self.zones.bed
        if label == ActivityLabel.DAILY:
            return self.zones.table
        return None

    def date_of(self, day_index: int) -> date:
        return self.start_date + timedelta(days=day_index)


@dataclass(frozen=True)
class TruthMinute:
    timestamp: datetime
    label: ActivityLabel
    position: tuple | None  # true occupant position, None when absent


@dataclass
class GroundTruth:
    minutes: list[TruthMinute]  # emitted minutes only, in order
    day_minutes: dict  # date -> {ActivityLabel: emitted-minute count}
    retained_days: set  # dates with >= 720 emitted minutes


# -- emission ---------------------------------------------------------------

_COLS = np.arange(GRID_W, dtype=np.float64)[None, :]
_ROWS = np.arange(GRID_H, dtype=np.float64)[:, None]


def _day_rng(scenario: Scenario, day: int) -> np.random.Generator:
    return np.random.default_rng([scenario.seed, day])


def _dropped_minutes(scenario: Scenario, day: int) -> set:
    """Sparse days lose one contiguous block (an outage-style gap)."""
    if day not in scenario.sparse_days:
        return set()
    gap = MINUTES_PER_DAY - scenario.sparse_coverage
    start = int(_day_rng(scenario, day).integers(0, scenario.sparse_coverage + 1))
    return set(range(start, start + gap))


def _schedule_lookup(day_sched) -> list:
    return sorted(day_sched, key=lambda e: e.start)


def emit(scenario: Scenario, outdir) -> tuple[RawRecording, GroundTruth]:
    """Write frames.csv / timestamps.txt under outdir and the ground truth."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    frames_path = outdir / "frames.csv"
    ts_path = outdir / "timestamps.txt"

    truth_minutes: list[TruthMinute] = []
    day_minutes: dict = {}
    retained_days: set = set()
    frame_lines: list[str] = []
    ts_lines: list[str] = []

    row_fmt = ",".join(["%.2f"] * (GRID_H * GRID_W))
    for day in range(scenario.days):
        rng = _day_rng(scenario, day)
        dropped = _dropped_minutes(scenario, day)
        sched = _schedule_lookup(scenario.schedule[day])
        day_date = scenario.date_of(day)
        midnight = datetime.combine(day_date, time(0, 0), tzinfo=timezone.utc)
        counts = {label: 0 for label in ActivityLabel}

        # draw all randomness up front; consumption is independent of the
        # heater so heater on/off scenarios share jitter and noise streams
        jitter = rng.uniform(-scenario.jitter, scenario.jitter, (MINUTES_PER_DAY, 2))
        noise = (
            rng.normal(0.0, scenario.noise_sd, (MINUTES_PER_DAY, GRID_H, GRID_W))
            if scenario.noise_sd > 0
            else None
        )

        frames = np.full((MINUTES_PER_DAY, GRID_H, GRID_W), scenario.ambient)
        labels = [ActivityLabel.NO_ACTIVITY] * MINUTES_PER_DAY
        positions: list = [None] * MINUTES_PER_DAY
        height = scenario.body_peak - scenario.ambient
        for entry in sched:
            zone = scenario._zone_for(entry.activity)
            sl = slice(entry.start, entry.end)
            xs = entry.anchor[0] + jitter[sl, 0]
            ys = entry.anchor[1] + jitter[sl, 1]
            if zone is not None:
                xs = np.clip(xs, zone.x0, zone.x1)
                ys = np.clip(ys, zone.y0, zone.y1)
            dist = np.hypot(
                _COLS[None, :, :] - xs[:, None, None],
                _ROWS[None, :, :] - ys[:, None, None],
            )
            frames[sl] += height * np.clip(1.0 - dist / scenario.body_radius, 0.0, None)
            for i, m in enumerate(range(entry.start, entry.end)):
                labels[m] = entry.activity
                positions[m] = (float(xs[i]), float(ys[i]))
        if scenario.heater is not None:
            hz = scenario.heater.zone
            for s, e in scenario.heater.duty:
                frames[s:e, int(hz.y0) : int(hz.y1) + 1, int(hz.x0) : int(hz.x1) + 1] = (
                    scenario.heater.temperature
                )
        if noise is not None:
            frames += noise

        rows = frames.transpose(0, 2, 1).reshape(MINUTES_PER_DAY, -1)
        for minute in range(MINUTES_PER_DAY):
            if minute in dropped:
                continue
            ts = midnight + timedelta(minutes=minute)
            ts_lines.append(ts.strftime("%Y-%m-%dT%H:%M:%SZ"))
            frame_lines.append(row_fmt % tuple(rows[minute]))
            truth_minutes.append(TruthMinute(ts, labels[minute], positions[minute]))
            counts[labels[minute]] += 1

        day_minutes[day_date] = counts
        if sum(counts.values()) >= RETAIN_THRESHOLD_MINUTES:
            retained_days.add(day_date)

    frames_path.write_text("\n".join(frame_lines) + ("\n" if frame_lines else ""))
    ts_path.write_text("\n".join(ts_lines) + ("\n" if ts_lines else ""))
    truth = GroundTruth(truth_minutes, day_minutes, retained_days)
    write_truth_csvs(truth, outdir)
    return RawRecording(ts_path, frames_path), truth


def write_truth_csvs(truth: GroundTruth, outdir) -> None:
    """Ground truth in the same shapes as the pipeline's activity outputs."""
    outdir = Path(outdir)
    with open(outdir / "truth_activity.csv", "w") as f:
        f.write("timestamp,label\n")
        for m in truth.minutes:
            f.write(f"{m.timestamp.strftime('%Y-%m-%dT%H:%M:%SZ')},{m.label.value}\n")
    with open(outdir / "truth_reports.csv", "w") as f:
        f.write("date,sleeping_hours,daily_hours,none_hours,coverage_minutes\n")
        for day in sorted(truth.day_minutes):
            c = truth.day_minutes[day]
            cov = sum(c.values())
            f.write(
                f"{day.isoformat()},{c[ActivityLabel.SLEEPING] / 60:.6f},"
                f"{c[ActivityLabel.DAILY] / 60:.6f},"
                f"{c[ActivityLabel.NO_ACTIVITY] / 60:.6f},{cov}\n"
            )


# -- scenario config files --------------------------------------------------

def _zone_to_json(z: ZoneRect) -> dict:
    return {"label": z.label, "x0": z.x0, "y0": z.y0, "x1": z.x1, "y1": z.y1}


def save_scenario(scenario: Scenario, path) -> None:
    data = {
        "days": scenario.days,
        "start_date": scenario.start_date.isoformat(),
        "zones": {
            "bed": scenario.zones.bed.to_dict(),
            "table": scenario.zones.table.to_dict(),
        },
        "schedule": [
            [
                {
                    "activity": e.activity.value,
                    "start": e.start,
                    "end": e.end,
                    "anchor": list(e.anchor),
                }
                for e in day
            ]
            for day in scenario.schedule
        ],
        "heater": None
        if scenario.heater is None
        else {
            "zone": _zone_to_json(scenario.heater.zone),
            "temperature": scenario.heater.temperature,
            "duty": [list(d) for d in scenario.heater.duty],
        },
        "ambient": scenario.ambient,
        "body_peak": scenario.body_peak,
        "body_radius": scenario.body_radius,
        "noise_sd": scenario.noise_sd,
        "jitter": scenario.jitter,
        "seed": scenario.seed,
        "sparse_days": sorted(scenario.sparse_days),
        "sparse_coverage": scenario.sparse_coverage,
    }
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


def load_scenario(path) -> Scenario:
    """Load a scenario config (JSON).

    ``schedule`` may be a per-day list of lists, or a single list applied to
    every day (a daily routine template).
    """
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidScenario(f"bad scenario JSON: {exc}") from exc

    def rect(d, label):
        return ZoneRect(
            d.get("label", label),
            float(d["x0"]), float(d["y0"]), float(d["x1"]), float(d["y1"]),
        )

    try:
        days = int(data["days"])
        zones = ZoneMap(rect(data["zones"]["bed"], "bed"), rect(data["zones"]["table"], "table"))
        raw_sched = data["schedule"]
        if raw_sched and isinstance(raw_sched[0], dict):
            raw_sched = [raw_sched] * days
        schedule = [
            [
                ScheduleEntry(
                    ActivityLabel(e["activity"]), int(e["start"]), int(e["end"]),
                    tuple(float(v) for v in e["anchor"]),
                )
                for e in day
            ]
            for day in raw_sched
        ]
        heater = None
        if data.get("heater"):
            h = data["heater"]
            heater = HeaterSpec(
                rect(h["zone"], "heater"),
                float(h["temperature"]),
                tuple((int(s), int(e)) for s, e in h.get("duty", [[0, MINUTES_PER_DAY]])),
            )
        return Scenario(
            days=days,
            zones=zones,
            schedule=schedule,
            start_date=date.fromisoformat(data.get("start_date", "2024-04-07")),
            heater=heater,
            ambient=float(data.get("ambient", 20.0)),
            body_peak=float(data.get("body_peak", 34.0)),
            body_radius=float(data.get("body_radius", 2.0)),
            noise_sd=float(data.get("noise_sd", 0.0)),
            jitter=float(data.get("jitter", 0.5)),
            seed=int(data.get("seed", 0)),
            sparse_days=frozenset(data.get("sparse_days", [])),
            sparse_coverage=int(data.get("sparse_coverage", 360)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidScenario):
            raise
        raise InvalidScenario(f"bad scenario config: {exc}") from exc


# -- validation -------------------------------------------------------------

@dataclass
class ValidationReport:
    max_duration_error_minutes: float
    label_accuracy: float
    duration_tolerance_minutes: float
    label_accuracy_floor: float
    heater_invariant: bool | None  # None when the scenario has no heater
    retained_days_match: bool
    passed: bool

    def summary(self) -> str:
        lines = [
            f"max per-day duration error: {self.max_duration_error_minutes:.2f} min "
            f"(tolerance {self.duration_tolerance_minutes:.0f})",
            f"per-minute label accuracy: {self.label_accuracy:.4%} "
            f"(floor {self.label_accuracy_floor:.4%})",
            f"retained-day set matches ground truth: {self.retained_days_match}",
        ]
        if self.heater_invariant is not None:
            lines.append(f"heater-exclusion invariance: {self.heater_invariant}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def _pipeline_for(scenario: Scenario, rec: RawRecording, detect_cfg: DetectConfig,
                  exclude_heater: bool) -> pl.PipelineResult:
    static = []
    if exclude_heater and scenario.heater is not None:
        static = [scenario.heater.zone]
    return pl.run_pipeline(rec, scenario.zones, static, detect_cfg)


def _person_tracks(result: pl.PipelineResult) -> dict:
    return {
        day: {ts: p for ts, p in dres.person.items()}
        for day, dres in result.days.items()
    }


def validate(
    scenario: Scenario,
    workdir,
    detect_cfg: DetectConfig = DetectConfig(),
    duration_tolerance_minutes: float | None = None,
    label_accuracy_floor: float | None = None,
) -> ValidationReport:
    """Emit the scenario, run the pipeline, and score it against ground truth.

    Default tolerances: clean scenarios (no noise) must hit every duration
    within 2 minutes with perfect labels; noisy ones get 10 minutes and no
    accuracy floor.
    """
    workdir = Path(workdir)
    clean = scenario.noise_sd == 0
    if duration_tolerance_minutes is None:
        duration_tolerance_minutes = 2.0 if clean else 10.0
    if label_accuracy_floor is None:
        label_accuracy_floor = 1.0 if clean else 0.0

    rec, truth = emit(scenario, workdir / "recording")
    result = _pipeline_for(scenario, rec, detect_cfg, exclude_heater=True)

    retained_match = set(result.days) == truth.retained_days

    max_err = 0.0
    for day, dres in result.days.items():
        truth_counts = truth.day_minutes[day]
        rep = dres.report
        for label, reported_hours in (
            (ActivityLabel.SLEEPING, rep.sleeping_hours),
            (ActivityLabel.DAILY, rep.daily_hours),
            (ActivityLabel.NO_ACTIVITY, rep.none_hours),
        ):
            max_err = max(max_err, abs(reported_hours * 60 - truth_counts[label]))

    pipeline_labels = {
        e.timestamp: e.label for d in result.days.values() for e in d.series.entries
    }
    total = correct = 0
    for m in truth.minutes:
        if m.timestamp.date() not in truth.retained_days:
            continue
        total += 1
        if pipeline_labels.get(m.timestamp) == m.label:
            correct += 1
    accuracy = correct / total if total else 1.0

    heater_invariant = None
    if scenario.heater is not None:
        heater_invariant = check_heater_invariance(scenario, workdir, detect_cfg)

    passed = (
        retained_match
        and max_err <= duration_tolerance_minutes
        and accuracy >= label_accuracy_floor
        and heater_invariant in (None, True)
    )
    report = ValidationReport(
        max_duration_error_minutes=max_err,
        label_accuracy=accuracy,
        duration_tolerance_minutes=duration_tolerance_minutes,
        label_accuracy_floor=label_accuracy_floor,
        heater_invariant=heater_invariant,
        retained_days_match=retained_match,
        passed=passed,
    )
    (workdir / "validation.txt").write_text(report.summary() + "\n")
    return report


def check_heater_invariance(
    scenario: Scenario, workdir, detect_cfg: DetectConfig = DetectConfig()
) -> bool:
    """Person track, reports, and heatmaps must be byte-identical whether the
    heater is present (and zone-excluded) or absent entirely."""
    if scenario.heater is None:
        raise InvalidScenario("scenario has no heater to check")
    workdir = Path(workdir)
    import copy

    bare = copy.copy(scenario)
    bare.heater = None

    outputs = {}
    for tag, scn in (("with_heater", scenario), ("no_heater", bare)):
        rundir = workdir / f"invariance_{tag}"
        rec, _ = emit(scn, rundir / "recording")
        result = _pipeline_for(scn, rec, detect_cfg, exclude_heater=True)
        outdir = rundir / "out"
        pl.write_outputs(result, outdir)
        outputs[tag] = outdir

    names_a = sorted(p.name for p in outputs["with_heater"].iterdir()
                     if not p.name.startswith("scatter_"))
    names_b = sorted(p.name for p in outputs["no_heater"].iterdir()
                     if not p.name.startswith("scatter_"))
    if names_a != names_b:
        return False
    return all(
        (outputs["with_heater"] / n).read_bytes() == (outputs["no_heater"] / n).read_bytes()
        for n in names_a
    )
