"""Calendar stepping and aggregation of agent results into farm reports."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .agents import HourlyProfile, agent_daily_energy, agent_profile, month_to_date_energy
from .model import (
    DAYS_IN_YEAR,
    AgentKind,
    FarmConfig,
    SimDate,
    days_in_month,
    iter_dates,
)


@dataclass(frozen=True)
class DailyReport:
    date: SimDate
    per_agent: Mapping[AgentKind, HourlyProfile]
    total_hourly: HourlyProfile
    total: float

    def agent_totals(self) -> dict[AgentKind, float]:
        return {kind: profile.total for kind, profile in self.per_agent.items()}

    def summary(self) -> "DaySummary":
        return DaySummary(self.date, self.agent_totals(), self.total)


@dataclass(frozen=True)
class DaySummary:
    """Per-agent daily totals without the hourly breakdown."""

    date: SimDate
    per_agent_totals: Mapping[AgentKind, float]
    total: float


@dataclass(frozen=True)
class PeriodReport:
    label: str  # "MM" for a month, "year" for the whole year
    days: Sequence[DaySummary]
    per_agent_totals: Mapping[AgentKind, float]
    total: float

    def weeks(self) -> list[list[DaySummary]]:
        """Consecutive 7-day slices; the last slice may be shorter."""
        return [list(self.days[i:i + 7]) for i in range(0, len(self.days), 7)]

    def weekly_totals(self) -> list[float]:
        return [math.fsum(d.total for d in week) for week in self.weeks()]


def simulate_day(config: FarmConfig, date: SimDate) -> DailyReport:
    per_agent = {kind: agent_profile(kind, config, date) for kind in AgentKind}
    total_hourly = HourlyProfile.stack(per_agent.values())
    return DailyReport(date, per_agent, total_hourly, total_hourly.total)


def _aggregate(label: str, days: list[DaySummary]) -> PeriodReport:
    per_agent = {
        kind: math.fsum(d.per_agent_totals[kind] for d in days) for kind in AgentKind
    }
    return PeriodReport(label, days, per_agent, math.fsum(per_agent.values()))


def simulate_month(config: FarmConfig, month: int) -> PeriodReport:
    days = [simulate_day(config, date).summary() for date in iter_dates(month)]
    return _aggregate(f"{month:02d}", days)


def simulate_year(config: FarmConfig) -> PeriodReport:
    days = [simulate_day(config, date).summary() for date in iter_dates()]
    return _aggregate("year", days)


def monthly_closed_form(kind: AgentKind, config: FarmConfig, month: int) -> float:
    """A month's total for one agent straight from the equations: value at df=1 minus origin."""
    return (month_to_date_energy(kind, config, month, days_in_month(month))
            - month_to_date_energy(kind, config, month, 0))


def yearly_total(config: FarmConfig) -> float:
    """Farm energy over the year from daily agent energies, skipping hourly profiles."""
    return math.fsum(
        agent_daily_energy(kind, config, date) for date in iter_dates() for kind in AgentKind
    )


def average_day_total(config: FarmConfig) -> float:
    return yearly_total(config) / DAYS_IN_YEAR


def sweep_herd_sizes(base_config: FarmConfig, sizes: Sequence[int]) -> list[tuple[int, float]]:
    """Average-day farm energy for each herd size, in input order."""
    if not sizes:
        raise ValueError("sizes must not be empty")
    return [(n, average_day_total(base_config.with_updates(herd_size=int(n)))) for n in sizes]


def sweep_milking_units(base_config: FarmConfig, units: Sequence[int]) -> list[tuple[int, float]]:
    if not units:
        raise ValueError("units must not be empty")
    return [
        (u, average_day_total(base_config.with_updates(milking_units=int(u)))) for u in units
    ]


__all__ = [
    "DailyReport", "DaySummary", "PeriodReport",
    "simulate_day", "simulate_month", "simulate_year", "monthly_closed_form",
    "yearly_total", "average_day_total", "sweep_herd_sizes", "sweep_milking_units",
]
