"""The nine equipment agents: daily energy and its spread over the clock."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .model import (
    AgentKind,
    FarmConfig,
    SimDate,
    cooling_cpl,
    days_in_month,
    per_litre_consumption,
    water_heating_consumption,
)

HOURS_PER_DAY = 24


class ScheduleError(ValueError):
    """An agent has energy to spend but no active time to spend it in."""


@dataclass(frozen=True)
class HourlyProfile:
    """24 clock-hour slots of energy in kWh; slot i covers [i:00, i+1:00)."""

    slots: tuple[float, ...]

    def __post_init__(self):
        slots = tuple(float(s) for s in self.slots)
        if len(slots) != HOURS_PER_DAY:
            raise ValueError(f"expected {HOURS_PER_DAY} slots, got {len(slots)}")
        if any(s < 0 or math.isnan(s) for s in slots):
            raise ValueError("hourly slots must be non-negative")
        object.__setattr__(self, "slots", slots)

    @classmethod
    def zeros(cls) -> "HourlyProfile":
        return cls((0.0,) * HOURS_PER_DAY)

    @classmethod
    def stack(cls, profiles: Iterable["HourlyProfile"]) -> "HourlyProfile":
        """Slot-wise sum."""
        acc = [0.0] * HOURS_PER_DAY
        for p in profiles:
            for i, s in enumerate(p.slots):
                acc[i] += s
        return cls(tuple(acc))

    @property
    def total(self) -> float:
        return math.fsum(self.slots)

    def __getitem__(self, hour: int) -> float:
        return self.slots[hour]


@dataclass(frozen=True)
class AgentSchedule:
    """Active windows as (start hour, duration in hours), clamped at 24:00."""

    active_windows: tuple[tuple[float, float], ...]

    def __post_init__(self):
        clamped = []
        for start, duration in self.active_windows:
            start, duration = float(start), float(duration)
            if not 0 <= start < HOURS_PER_DAY:
                raise ValueError(f"window start must be in [0, 24), got {start}")
            if duration <= 0:
                raise ValueError(f"window duration must be > 0, got {duration}")
            clamped.append((start, min(duration, HOURS_PER_DAY - start)))
        object.__setattr__(self, "active_windows", tuple(clamped))

    @property
    def total_duration(self) -> float:
        return sum(d for _, d in self.active_windows)

    def covers(self, hour: int) -> bool:
        """True if any window overlaps slot ``hour``."""
        return any(start < hour + 1 and start + d > hour for start, d in self.active_windows)


def milking_session_duration(n_cows: int, n_units: int, row_time_minutes: float = 8.0,
                             cap_hours: float = 10.0) -> float:
    """Hours to milk the herd once, in rows of ``n_units`` cows."""
    if n_cows < 1 or n_units < 1:
        raise ValueError("n_cows and n_units must be >= 1")
    rows = math.ceil(n_cows / n_units)
    return min(rows * row_time_minutes / 60.0, cap_hours)


def _agent_cumulative(kind: AgentKind, config: FarmConfig, df: float) -> float:
    k = config.constants
    n, mpd = config.herd_size, config.milk_per_cow_per_day
    if kind is AgentKind.WATER_HEATING:
        return water_heating_consumption(
            df, n, config.milking_units, config.water_heating_mode, k
        )
    if kind is AgentKind.MILK_HARVESTING:
        cpl = k.cpl_harvest
    elif kind is AgentKind.MILK_COOLING:
        cpl = cooling_cpl(config.milk_cooling_mode, k)
    else:
        cpl = k.cpl_other[kind]
    return per_litre_consumption(df, n, mpd, cpl)


def month_to_date_energy(kind: AgentKind, config: FarmConfig, month: int, day: int) -> float:
    """Cumulative consumption from the start of ``month`` through ``day``.

    ``day`` may be 0, the month's origin: zero for per-litre agents and the
    herd-size term alone for water heating.
    """
    n_days = days_in_month(month)
    if not 0 <= day <= n_days:
        raise ValueError(f"day must be in 0..{n_days}, got {day}")
    return _agent_cumulative(AgentKind(kind), config, day / n_days)


def agent_daily_energy(kind: AgentKind, config: FarmConfig, date: SimDate) -> float:
    """Energy used by one agent on ``date``: the day's increment of the cumulative curve."""
    kind = AgentKind(kind)
    today = month_to_date_energy(kind, config, date.month, date.day)
    before = month_to_date_energy(kind, config, date.month, date.day - 1)
    return today - before


def schedule_for(kind: AgentKind, config: FarmConfig) -> AgentSchedule:
    kind = AgentKind(kind)
    s = config.schedule
    session = milking_session_duration(
        config.herd_size, config.milking_units, s.row_time_minutes, s.max_session_hours
    )
    starts = s.milking_start_hours

    if kind in (AgentKind.LIGHTS, AgentKind.COMPRESSOR, AgentKind.OTHER):
        windows = [(0.0, 24.0)]
    elif kind is AgentKind.MILK_HARVESTING:
        windows = [(t, session) for t in starts]
    elif kind is AgentKind.MILK_COOLING:
        windows = [(t, session + s.cooling_tail_hours) for t in starts]
    elif kind is AgentKind.WATER_HEATING:
        hours = s.water_heating_base_hours + s.water_heating_hours_per_cow * config.herd_size
        windows = [(t + session, hours) for t in starts]
    else:
        windows = [(t + session, s.post_milking_window_hours) for t in starts]
    # a window pushed past midnight by a long session has no time left in the day
    return AgentSchedule(tuple(w for w in windows if w[0] < HOURS_PER_DAY))


def distribute(energy: float, schedule: AgentSchedule) -> HourlyProfile:
    """Spread ``energy`` uniformly in time over the schedule's active windows."""
    if energy < 0:
        raise ValueError(f"energy must be >= 0, got {energy}")
    total = schedule.total_duration
    if total <= 0:
        if energy > 0:
            raise ScheduleError("positive energy with a zero-duration schedule")
        return HourlyProfile.zeros()
    rate = energy / total
    slots = [0.0] * HOURS_PER_DAY
    for start, duration in schedule.active_windows:
        end = start + duration
        for hour in range(int(math.floor(start)), int(math.ceil(end))):
            overlap = min(end, hour + 1) - max(start, hour)
            if overlap > 0:
                slots[hour] += rate * overlap
    return HourlyProfile(tuple(slots))


def agent_profile(kind: AgentKind, config: FarmConfig, date: SimDate) -> HourlyProfile:
    return distribute(agent_daily_energy(kind, config, date), schedule_for(kind, config))
