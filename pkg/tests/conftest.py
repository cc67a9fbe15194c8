from pathlib import Path

import pytest
from hypothesis import strategies as st

from dairy_abm.model import (
    EQUIPMENT_KINDS,
    ConstantsTable,
    FarmConfig,
    MilkCoolingMode,
    SimDate,
    WaterHeatingMode,
    days_in_month,
)
from dairy_abm.scenario import table1_farm

ROOT = Path(__file__).resolve().parents[1]
TABLE1_CONFIG = ROOT / "configs" / "table1_farm.yaml"


@pytest.fixture
def farm() -> FarmConfig:
    return table1_farm()


@pytest.fixture
def default_table() -> ConstantsTable:
    return ConstantsTable()


@st.composite
def sim_dates(draw):
    month = draw(st.integers(1, 12))
    return SimDate(month, draw(st.integers(1, days_in_month(month))))


coefficients = st.floats(0.0, 2.0, allow_nan=False, allow_infinity=False)


@st.composite
def constants_tables(draw):
    return ConstantsTable(
        wh_base=draw(st.floats(0.0, 1000.0)),
        wh_per_unit=draw(st.floats(0.0, 1.0)),
        wh_per_cow=draw(st.floats(0.0, 1.0)),
        cpl_harvest=draw(coefficients),
        cpl_cooling_dx=draw(coefficients),
        cpl_cooling_ib=draw(coefficients),
        cpl_other={kind: draw(coefficients) for kind in EQUIPMENT_KINDS},
    )


@st.composite
def farm_configs(draw, constants=None):
    return FarmConfig(
        herd_size=draw(st.integers(1, 1000)),
        milking_units=draw(st.integers(1, 60)),
        water_heating_mode=draw(st.sampled_from(list(WaterHeatingMode))),
        milk_cooling_mode=draw(st.sampled_from(list(MilkCoolingMode))),
        milk_per_cow_per_day=draw(st.floats(1.0, 60.0)),
        constants=draw(constants_tables()) if constants is None else constants,
    )


ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    marker = report.nodeid.rsplit("::", 1)[-1]
    if marker.startswith("test_criterion_"):
        number = int(marker.split("_")[2])
        ACCEPTANCE_RESULTS[number] = ("PASS" if report.passed else "FAIL", marker)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        status, name = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {status}  ({name})")
