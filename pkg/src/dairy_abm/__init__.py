"""Agent-based model of dairy-farm electricity consumption."""

from .agents import (
    AgentSchedule,
    HourlyProfile,
    ScheduleError,
    agent_daily_energy,
    distribute,
    milking_session_duration,
    schedule_for,
)
from .calibration import (
    CalibrationResult,
    ReferenceRow,
    builtin_reference_table,
    default_constants,
    fit_constants,
    validate,
)
from .model import (
    AgentKind,
    ConstantsTable,
    FarmConfig,
    MilkCoolingMode,
    ScheduleSettings,
    SimDate,
    WaterHeatingMode,
    cooling_cpl,
    day_factor,
    per_litre_consumption,
    water_heating_consumption,
)
from .simulator import (
    DailyReport,
    PeriodReport,
    simulate_day,
    simulate_month,
    simulate_year,
    sweep_herd_sizes,
)

__version__ = "0.1.0"
