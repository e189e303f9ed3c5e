"""Canned scenario builders for validation and demos.

These construct the standard synthetic set-ups: the 35-day reference
recording with seven sparse days, clean randomized short scenarios, the
statistics-calibrated month, and the heater-invariance scenario.
"""

from __future__ import annotations

import numpy as np

from .activity import ActivityLabel
from .synth import HeaterSpec, Scenario, ScheduleEntry
from .zones import ZoneMap, ZoneRect

BED = ZoneRect("bed", 1.0, 1.0, 5.0, 4.0)
TABLE = ZoneRect("table", 10.0, 7.0, 14.0, 10.0)
HEATER = ZoneRect("heater", 13.0, 1.0, 14.0, 2.0)
DEFAULT_ZONES = ZoneMap(BED, TABLE)

BED_ANCHOR = (3.0, 2.5)
TABLE_ANCHOR = (12.0, 8.5)


def _day(sleep_minutes: int, daily_minutes: int, daily_start: int = 600):
    """Sleep from midnight, daily activity from ``daily_start`` (10:00)."""
    entries = []
    if sleep_minutes > 0:
        entries.append(ScheduleEntry(ActivityLabel.SLEEPING, 0, sleep_minutes, BED_ANCHOR))
    if daily_minutes > 0:
        entries.append(
            ScheduleEntry(ActivityLabel.DAILY, daily_start, daily_start + daily_minutes, TABLE_ANCHOR)
        )
    return entries


def make_reference_scenario(noise_sd: float = 0.0, seed: int = 7) -> Scenario:
    """35 days, 7 sparse (the 28-retained / 20%-missing split)."""
    days = 35
    sparse = frozenset({4, 9, 14, 19, 24, 29, 34})
    rng = np.random.default_rng(seed)
    # high-occupancy routine: empty-room minutes are where per-frame
    # normalization can hallucinate a warm blob out of pure noise
    schedule = [
        _day(int(rng.integers(540, 600)), int(rng.integers(750, 800)),
             daily_start=620)
        for _ in range(days)
    ]
    return Scenario(
        days=days,
        zones=DEFAULT_ZONES,
        schedule=schedule,
        noise_sd=noise_sd,
        seed=seed,
        sparse_days=sparse,
    )


def make_clean_scenario(seed: int, days: int = 2) -> Scenario:
    """Short noise-free scenario with seeded schedule variation."""
    rng = np.random.default_rng(seed)
    schedule = [
        _day(int(rng.integers(400, 620)), int(rng.integers(300, 500)),
             daily_start=int(rng.integers(630, 700)))
        for _ in range(days)
    ]
    return Scenario(days=days, zones=DEFAULT_ZONES, schedule=schedule, seed=seed)


def make_stats_scenario(seed: int = 11) -> Scenario:
    """28 dense days whose ground-truth means are exactly 9.6 h sleeping and
    7.5 h daily activity."""
    days = 28
    # offsets sum to zero in both columns, so means are exact
    sleep_offsets = [((i % 7) - 3) * 20 for i in range(days)]
    daily_offsets = [((i % 4) * 2 - 3) * 15 for i in range(days)]
    assert sum(sleep_offsets) == 0 and sum(daily_offsets) == 0
    schedule = [
        _day(576 + sleep_offsets[i], 450 + daily_offsets[i], daily_start=660)
        for i in range(days)
    ]
    return Scenario(days=days, zones=DEFAULT_ZONES, schedule=schedule, seed=seed)


def make_heater_scenario(seed: int = 3, duty=((0, 1440),)) -> Scenario:
    """Heater at body temperature, zero jitter/noise: exercises the static-
    zone exclusion and the heater-invariance check under exact arithmetic."""
    days = 3
    schedule = [_day(540, 420) for _ in range(days)]
    return Scenario(
        days=days,
        zones=DEFAULT_ZONES,
        schedule=schedule,
        heater=HeaterSpec(HEATER, temperature=34.0, duty=tuple(duty)),
        jitter=0.0,
        seed=seed,
    )


def make_interrupted_sleep_scenario(seed: int = 5) -> Scenario:
    """One day with two separated sleep blocks."""
    schedule = [
        [
            ScheduleEntry(ActivityLabel.SLEEPING, 0, 120, BED_ANCHOR),
            ScheduleEntry(ActivityLabel.SLEEPING, 180, 300, BED_ANCHOR),
            ScheduleEntry(ActivityLabel.DAILY, 600, 1050, TABLE_ANCHOR),
        ]
    ]
    return Scenario(days=1, zones=DEFAULT_ZONES, schedule=schedule, seed=seed)
