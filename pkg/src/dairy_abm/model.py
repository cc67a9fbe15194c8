"""Domain types and consumption equations for the dairy-farm model.

Units:
- Energy: kWh
- Milk: litres
- Per-litre coefficients: kWh per litre
- Time: clock hours

All functions here are pure; every value type is frozen after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping

DAYS_IN_MONTH = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)
DAYS_IN_YEAR = sum(DAYS_IN_MONTH)
MONTHS = tuple(range(1, 13))


class AgentKind(str, Enum):
    """The nine equipment agents of a dairy farm."""

    WATER_HEATING = "water_heating"
    MILK_HARVESTING = "milk_harvesting"
    MILK_COOLING = "milk_cooling"
    LIGHTS = "lights"
    WASH_PUMP = "wash_pump"
    COMPRESSOR = "compressor"
    SCRAPER = "scraper"
    EFFLUENT_PUMP = "effluent_pump"
    OTHER = "other"


# Agents whose consumption follows the generic per-litre equipment equation.
EQUIPMENT_KINDS = (
    AgentKind.LIGHTS,
    AgentKind.WASH_PUMP,
    AgentKind.COMPRESSOR,
    AgentKind.SCRAPER,
    AgentKind.EFFLUENT_PUMP,
    AgentKind.OTHER,
)


class WaterHeatingMode(str, Enum):
    ELECTRIC = "electric"
    NON_ELECTRIC = "non_electric"  # oil or other fuel; no electrical load


class MilkCoolingMode(str, Enum):
    DIRECT_EXPANSION = "dx"
    ICE_BULK = "ib"


def days_in_month(month: int) -> int:
    if not 1 <= month <= 12:
        raise ValueError(f"month must be in 1..12, got {month}")
    return DAYS_IN_MONTH[month - 1]


@dataclass(frozen=True, order=True)
class SimDate:
    """Calendar position in a fixed 365-day year."""

    month: int
    day: int

    def __post_init__(self):
        if not isinstance(self.month, int) or not isinstance(self.day, int):
            raise TypeError("month and day must be integers")
        n_days = days_in_month(self.month)
        if not 1 <= self.day <= n_days:
            raise ValueError(
                f"day must be in 1..{n_days} for month {self.month}, got {self.day}"
            )

    @classmethod
    def parse(cls, text: str) -> "SimDate":
        """Parse ``MM-DD``."""
        try:
            month_s, day_s = text.strip().split("-")
            return cls(int(month_s), int(day_s))
        except ValueError as exc:
            raise ValueError(f"invalid date {text!r}, expected MM-DD: {exc}") from None

    def __str__(self) -> str:
        return f"{self.month:02d}-{self.day:02d}"


def iter_dates(month: int | None = None):
    """Yield every date of one month, or of the whole year when month is None."""
    months = MONTHS if month is None else (month,)
    for m in months:
        for d in range(1, days_in_month(m) + 1):
            yield SimDate(m, d)


@dataclass(frozen=True)
class ConstantsTable:
    """Coefficients of the four consumption equations.

    The three water-heating constants default to the original model's fixed
    values. Per-litre coefficients have no published values and default
    to zero; use :func:`dairy_abm.calibration.fit_constants` or the shipped
    calibrated table (:func:`dairy_abm.calibration.default_constants`).
    """

    wh_base: float = 1.84
    wh_per_unit: float = 0.01345
    wh_per_cow: float = 0.075392
    cpl_harvest: float = 0.0
    cpl_cooling_dx: float = 0.0
    cpl_cooling_ib: float = 0.0
    cpl_other: Mapping[AgentKind, float] = field(
        default_factory=lambda: {kind: 0.0 for kind in EQUIPMENT_KINDS}
    )

    def __post_init__(self):
        other = {AgentKind(k): float(v) for k, v in dict(self.cpl_other).items()}
        if set(other) != set(EQUIPMENT_KINDS):
            missing = sorted(k.value for k in set(EQUIPMENT_KINDS) - set(other))
            extra = sorted(k.value for k in set(other) - set(EQUIPMENT_KINDS))
            raise ValueError(f"cpl_other keys mismatch: missing={missing} extra={extra}")
        # keep a canonical ordering so equal tables compare and serialize identically
        object.__setattr__(self, "cpl_other", {k: other[k] for k in EQUIPMENT_KINDS})
        for name in ("wh_base", "wh_per_unit", "wh_per_cow", "cpl_harvest",
                     "cpl_cooling_dx", "cpl_cooling_ib"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        for kind, value in self.cpl_other.items():
            if value < 0:
                raise ValueError(f"cpl_other[{kind.value}] must be >= 0, got {value}")

    def with_updates(self, **changes) -> "ConstantsTable":
        return replace(self, **changes)

    def aggregate_cpl(self, cooling: MilkCoolingMode) -> float:
        """Sum of all per-litre coefficients active under a cooling mode."""
        return self.cpl_harvest + cooling_cpl(cooling, self) + sum(self.cpl_other.values())


@dataclass(frozen=True)
class ScheduleSettings:
    """Timing knobs that shape hourly profiles. They never change daily totals."""

    row_time_minutes: float = 8.0
    max_session_hours: float = 10.0
    cooling_tail_hours: float = 2.0
    water_heating_base_hours: float = 1.0
    water_heating_hours_per_cow: float = 0.01
    post_milking_window_hours: float = 0.5
    milking_start_hours: tuple[float, ...] = (7.0, 17.0)

    def __post_init__(self):
        object.__setattr__(
            self, "milking_start_hours", tuple(float(h) for h in self.milking_start_hours)
        )
        for name in ("row_time_minutes", "max_session_hours", "post_milking_window_hours",
                     "water_heating_base_hours"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("cooling_tail_hours", "water_heating_hours_per_cow"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not self.milking_start_hours:
            raise ValueError("milking_start_hours must not be empty")
        if any(not 0 <= h < 24 for h in self.milking_start_hours):
            raise ValueError("milking_start_hours must lie in [0, 24)")


@dataclass(frozen=True)
class FarmConfig:
    """Complete scenario description for one farm."""

    herd_size: int
    milking_units: int
    water_heating_mode: WaterHeatingMode = WaterHeatingMode.ELECTRIC
    milk_cooling_mode: MilkCoolingMode = MilkCoolingMode.DIRECT_EXPANSION
    milk_per_cow_per_day: float = 22.0
    constants: ConstantsTable = field(default_factory=ConstantsTable)
    schedule: ScheduleSettings = field(default_factory=ScheduleSettings)

    def __post_init__(self):
        if isinstance(self.herd_size, bool) or not isinstance(self.herd_size, int):
            raise TypeError(f"herd_size must be an integer, got {self.herd_size!r}")
        if isinstance(self.milking_units, bool) or not isinstance(self.milking_units, int):
            raise TypeError(f"milking_units must be an integer, got {self.milking_units!r}")
        if self.herd_size < 1:
            raise ValueError(f"herd_size must be >= 1, got {self.herd_size}")
        if self.milking_units < 1:
            raise ValueError(f"milking_units must be >= 1, got {self.milking_units}")
        if not self.milk_per_cow_per_day > 0:
            raise ValueError(
                f"milk_per_cow_per_day must be > 0, got {self.milk_per_cow_per_day}"
            )
        object.__setattr__(self, "water_heating_mode", WaterHeatingMode(self.water_heating_mode))
        object.__setattr__(self, "milk_cooling_mode", MilkCoolingMode(self.milk_cooling_mode))

    def with_updates(self, **changes) -> "FarmConfig":
        return replace(self, **changes)


def _check_df(df: float) -> None:
    if not 0.0 <= df <= 1.0:
        raise ValueError(f"day factor must be in [0, 1], got {df}")


def day_factor(date: SimDate) -> float:
    """Fraction of the month elapsed at the end of ``date``."""
    return date.day / days_in_month(date.month)


def water_heating_consumption(
    df: float,
    n_cows: int,
    n_units: int,
    mode: WaterHeatingMode,
    k: ConstantsTable,
) -> float:
    """Cumulative water-heating energy (kWh) at day factor ``df``.

    Only the base and per-unit terms scale with ``df``; the per-cow term does not.
    """
    _check_df(df)
    if n_cows < 1 or n_units < 1:
        raise ValueError("n_cows and n_units must be >= 1")
    if WaterHeatingMode(mode) is WaterHeatingMode.NON_ELECTRIC:
        return 0.0
    return df * (k.wh_base + n_units * k.wh_per_unit) + (n_cows * k.wh_per_cow)


def per_litre_consumption(df: float, n_cows: int, mpd: float, cpl: float) -> float:
    """Cumulative energy (kWh) of a per-litre agent: df * cows * litres/cow/day * kWh/litre."""
    _check_df(df)
    if n_cows < 1:
        raise ValueError("n_cows must be >= 1")
    if not mpd > 0:
        raise ValueError(f"mpd must be > 0, got {mpd}")
    if cpl < 0:
        raise ValueError(f"cpl must be >= 0, got {cpl}")
    return df * n_cows * mpd * cpl


def cooling_cpl(mode: MilkCoolingMode, k: ConstantsTable) -> float:
    if MilkCoolingMode(mode) is MilkCoolingMode.DIRECT_EXPANSION:
        return k.cpl_cooling_dx
    return k.cpl_cooling_ib
