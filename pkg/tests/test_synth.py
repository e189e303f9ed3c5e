"""Scenario generator: determinism, self-consistency, detectability."""

from datetime import date

import numpy as np
import pytest

from thermotrack import scenarios, synth
from thermotrack.activity import ActivityLabel
from thermotrack.blobdetect import detect
from thermotrack.framegrid import reshape
from thermotrack.ingest import day_coverage, parse_recording
from thermotrack.synth import (
    InvalidScenario,
    Scenario,
    ScheduleEntry,
    emit,
    load_scenario,
    save_scenario,
)


ZONES = scenarios.DEFAULT_ZONES


def one_day(schedule, **kw):
    return Scenario(days=1, zones=ZONES, schedule=[schedule], **kw)


class TestScenarioValidation:
    def test_overlapping_intervals_rejected(self):
        sched = [
            ScheduleEntry(ActivityLabel.SLEEPING, 0, 300, scenarios.BED_ANCHOR),
            ScheduleEntry(ActivityLabel.DAILY, 200, 400, scenarios.TABLE_ANCHOR),
        ]
        with pytest.raises(InvalidScenario):
            one_day(sched)

    def test_anchor_outside_zone_rejected(self):
        sched = [ScheduleEntry(ActivityLabel.SLEEPING, 0, 300, (12.0, 8.0))]
        with pytest.raises(InvalidScenario):
            one_day(sched)

    def test_noise_margin_rejected(self):
        with pytest.raises(InvalidScenario):
            one_day([], ambient=20.0, body_peak=21.0, noise_sd=0.5)

    def test_bad_sparse_day(self):
        with pytest.raises(InvalidScenario):
            one_day([], sparse_days=frozenset({5}))


class TestEmit:
    def test_empty_schedule_constant_frames(self, tmp_path):
        rec, truth = emit(one_day([]), tmp_path)
        series = parse_recording(rec)
        assert len(series) == 1440
        assert (series.values == 20.0).all()
        assert all(m.label == ActivityLabel.NO_ACTIVITY for m in truth.minutes)

    def test_sleep_block_has_blob_in_bed(self, tmp_path):
        sched = [ScheduleEntry(ActivityLabel.SLEEPING, 0, 720, scenarios.BED_ANCHOR)]
        rec, truth = emit(one_day(sched), tmp_path)
        series = parse_recording(rec)
        for i in (0, 100, 719):
            blobs = detect(reshape(series.values[i]))
            assert len(blobs) == 1
            x, y = blobs[0].centroid
            assert ZONES.bed.contains(x, y)
        assert not detect(reshape(series.values[720]))

    def test_deterministic_byte_identical(self, tmp_path):
        scn = scenarios.make_clean_scenario(seed=42, days=1)
        rec_a, _ = emit(scn, tmp_path / "a")
        rec_b, _ = emit(scn, tmp_path / "b")
        assert rec_a.frames_path.read_bytes() == rec_b.frames_path.read_bytes()
        assert rec_a.timestamp_path.read_bytes() == rec_b.timestamp_path.read_bytes()

    def test_parse_emit_round_trip(self, tmp_path):
        scn = scenarios.make_clean_scenario(seed=9, days=2)
        rec, truth = emit(scn, tmp_path)
        series = parse_recording(rec)
        assert len(series) == len(truth.minutes)
        assert series.timestamps == [m.timestamp for m in truth.minutes]
        # the parsed floats must equal the file's decimal fields exactly
        first_line = rec.frames_path.read_text().split("\n", 1)[0]
        want = np.array([float(f) for f in first_line.split(",")])
        np.testing.assert_array_equal(series.values[0], want)

    def test_truth_durations_match_schedule_recount(self, tmp_path):
        scn = scenarios.make_clean_scenario(seed=3, days=2)
        _, truth = emit(scn, tmp_path)
        for d, day_date in enumerate(scn.date_of(i) for i in range(scn.days)):
            recount = {label: 0 for label in ActivityLabel}
            for m in truth.minutes:
                if m.timestamp.date() == day_date:
                    recount[m.label] += 1
            assert recount == truth.day_minutes[day_date]

    def test_sparse_day_below_threshold(self, tmp_path):
        scn = Scenario(
            days=2,
            zones=ZONES,
            schedule=[[], []],
            sparse_days=frozenset({1}),
            sparse_coverage=360,
        )
        rec, truth = emit(scn, tmp_path)
        cov = day_coverage(parse_recording(rec))
        assert [c.minutes_present for c in cov] == [1440, 360]
        assert [c.retained for c in cov] == [True, False]
        assert truth.retained_days == {scn.date_of(0)}

    def test_detectability_every_present_minute(self, tmp_path):
        scn = scenarios.make_clean_scenario(seed=17, days=1)
        rec, truth = emit(scn, tmp_path)
        series = parse_recording(rec)
        by_ts = dict(zip(series.timestamps, series.values))
        for m in truth.minutes:
            if m.position is None:
                continue
            blobs = detect(reshape(by_ts[m.timestamp]))
            assert blobs, f"no blob at {m.timestamp}"
            zone = ZONES.bed if m.label == ActivityLabel.SLEEPING else ZONES.table
            assert any(zone.contains(*b.centroid) for b in blobs)


class TestScenarioFiles:
    def test_save_load_round_trip(self, tmp_path):
        scn = scenarios.make_heater_scenario()
        path = tmp_path / "scn.json"
        save_scenario(scn, path)
        loaded = load_scenario(path)
        assert loaded.days == scn.days
        assert loaded.schedule == scn.schedule
        assert loaded.heater == scn.heater
        assert loaded.zones == scn.zones
        assert loaded.sparse_days == scn.sparse_days

    def test_template_schedule_expands(self, tmp_path):
        path = tmp_path / "scn.json"
        path.write_text(
            """
            {"days": 3,
             "zones": {"bed": {"x0": 1, "y0": 1, "x1": 5, "y1": 4},
                       "table": {"x0": 10, "y0": 7, "x1": 14, "y1": 10}},
             "schedule": [{"activity": "Sleeping", "start": 0, "end": 480,
                           "anchor": [3.0, 2.5]}]}
            """
        )
        scn = load_scenario(path)
        assert len(scn.schedule) == 3
        assert all(day == scn.schedule[0] for day in scn.schedule)

    def test_bad_config_rejected(self, tmp_path):
        path = tmp_path / "scn.json"
        path.write_text("{\"days\": 1}")
        with pytest.raises(InvalidScenario):
            load_scenario(path)
        path.write_text("not json")
        with pytest.raises(InvalidScenario):
            load_scenario(path)


class TestValidate:
    def test_clean_scenario_passes(self, tmp_path):
        scn = scenarios.make_clean_scenario(seed=5, days=1)
        report = synth.validate(scn, tmp_path)
        assert report.passed
        assert report.max_duration_error_minutes <= 2.0
        assert report.label_accuracy == 1.0

    def test_absent_occupant_all_none(self, tmp_path):
        scn = one_day([])
        report = synth.validate(scn, tmp_path)
        assert report.passed
        _, truth = emit(scn, tmp_path / "again")
        counts = truth.day_minutes[scn.date_of(0)]
        assert counts[ActivityLabel.SLEEPING] == 0
        assert counts[ActivityLabel.DAILY] == 0
        assert counts[ActivityLabel.NO_ACTIVITY] == 1440

    def test_heater_invariance(self, tmp_path):
        scn = scenarios.make_heater_scenario()
        assert synth.check_heater_invariance(scn, tmp_path)

    def test_interrupted_sleep_flagged(self, tmp_path):
        scn = scenarios.make_interrupted_sleep_scenario()
        rec, _ = emit(scn, tmp_path / "recording")
        from thermotrack import pipeline as pl

        result = pl.run_pipeline(rec, scn.zones)
        (day_result,) = result.days.values()
        assert day_result.report.interrupted_sleep
