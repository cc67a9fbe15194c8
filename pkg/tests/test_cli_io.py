import csv
import io
import json
import math

import pytest
import yaml

from dairy_abm import reports
from dairy_abm.calibration import default_constants, load_constants
from dairy_abm.cli import main, read_reference_rows
from dairy_abm.model import AgentKind, SimDate
from dairy_abm.scenario import ConfigError, load_scenario, parse_scenario
from dairy_abm.simulator import simulate_day, simulate_month, simulate_year

from .conftest import TABLE1_CONFIG

FARM = {"herd_size_cows": 75, "milking_units": 8, "water_heating": "electric",
        "milk_cooling": "dx", "milk_per_cow_per_day_litres": 22}


def write_config(tmp_path, data, name="farm.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data))
    return path


# -- scenario files ---------------------------------------------------------

def test_shipped_config_is_table1():
    scenario = load_scenario(TABLE1_CONFIG)
    farm = scenario.farm
    assert (farm.herd_size, farm.milking_units) == (75, 8)
    assert farm.water_heating_mode.value == "electric"
    assert farm.milk_cooling_mode.value == "dx"
    assert scenario.date == SimDate(6, 15)
    assert farm.constants == default_constants()
    assert scenario.sweep_sizes == (35, 45, 55, 65, 75, 85, 95)


@pytest.mark.parametrize("data,field", [
    ({"farm": FARM, "colour": "red"}, "colour"),
    ({"farm": {**FARM, "herd": 3}}, "farm.herd"),
    ({"farm": FARM, "schedule": {"tail": 1}}, "schedule.tail"),
    ({"farm": FARM, "constants": {"wh_base": 1}}, "constants.wh_base"),
    ({"farm": FARM, "constants": {"cpl_other_kwh_per_litre": {"fans": 1}}},
     "cpl_other_kwh_per_litre.fans"),
    ({"farm": FARM, "output": {"dir": "x"}}, "output.dir"),
])
def test_unknown_keys_named(data, field):
    with pytest.raises(ConfigError, match=field.replace(".", r"\.")):
        parse_scenario(data)


@pytest.mark.parametrize("farm,field", [
    ({**FARM, "herd_size_cows": 0}, "farm.herd_size_cows"),
    ({**FARM, "milking_units": "eight"}, "farm.milking_units"),
    ({**FARM, "water_heating": "solar"}, "farm.water_heating"),
    ({**FARM, "milk_cooling": "ice"}, "farm.milk_cooling"),
    ({**FARM, "milk_per_cow_per_day_litres": -1}, "farm.milk_per_cow_per_day_litres"),
    ({k: v for k, v in FARM.items() if k != "herd_size_cows"}, "farm.herd_size_cows"),
])
def test_invalid_farm_fields_named(farm, field):
    with pytest.raises(ConfigError, match=field.replace(".", r"\.")):
        parse_scenario({"farm": farm})


def test_bad_date_and_sizes():
    with pytest.raises(ConfigError, match="date"):
        parse_scenario({"farm": FARM, "date": "02-30"})
    with pytest.raises(ConfigError, match="sweep_herd_sizes_cows"):
        parse_scenario({"farm": FARM, "sweep_herd_sizes_cows": [35, -1]})


def test_partial_constants_fall_back_to_calibrated():
    scenario = parse_scenario({"farm": FARM, "constants": {
        "cpl_harvest_kwh_per_litre": 0.5, "cpl_other_kwh_per_litre": {"lights": 0.1}}})
    k, shipped = scenario.farm.constants, default_constants()
    assert k.cpl_harvest == 0.5
    assert k.cpl_other[AgentKind.LIGHTS] == 0.1
    assert k.cpl_cooling_dx == shipped.cpl_cooling_dx
    assert k.cpl_other[AgentKind.OTHER] == shipped.cpl_other[AgentKind.OTHER]


def test_constants_file_relative_to_config(tmp_path):
    assert main(["calibrate", "--out", str(tmp_path / "k.json")]) == 0
    path = write_config(tmp_path, {"farm": FARM, "constants_file": "k.json"})
    assert load_scenario(path).farm.constants == load_constants(tmp_path / "k.json")


def test_schedule_section():
    scenario = parse_scenario({"farm": FARM, "schedule": {"cooling_tail_hours": 0}})
    assert scenario.farm.schedule.cooling_tail_hours == 0


# -- reports ----------------------------------------------------------------

def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_hourly_csv_schema(farm):
    report = simulate_day(farm, SimDate(6, 15))
    rows = _csv(reports.hourly_csv(report))
    assert list(rows[0]) == ["date", "hour", "agent", "kwh"]
    assert len(rows) == 24 * 10
    totals = [r for r in rows if r["agent"] == "total"]
    assert len(totals) == 24
    for r in totals:
        assert math.isclose(float(r["kwh"]), report.total_hourly[int(r["hour"])], rel_tol=1e-5)


def test_json_round_trip_day(farm):
    report = simulate_day(farm, SimDate(3, 3))
    again = reports.from_json(reports.to_json(report))
    assert again.date == report.date
    assert math.isclose(again.total, report.total, rel_tol=1e-9)
    for kind in AgentKind:
        for a, b in zip(again.per_agent[kind].slots, report.per_agent[kind].slots):
            assert math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-15)


def test_json_round_trip_period(farm):
    report = simulate_month(farm, 2)
    again = reports.from_json(reports.to_json(report))
    assert again == report


def test_csv_and_json_agree(farm, tmp_path):
    cfg = str(TABLE1_CONFIG)
    for resolution in ("daily", "monthly", "yearly"):
        j, c = tmp_path / f"{resolution}.json", tmp_path / f"{resolution}.csv"
        assert main(["simulate", "--config", cfg, "--resolution", resolution,
                     "--format", "json", "--out", str(j)]) == 0
        assert main(["simulate", "--config", cfg, "--resolution", resolution,
                     "--format", "csv", "--out", str(c)]) == 0
        data = json.loads(j.read_text())
        totals = data["per_agent_totals"] if "per_agent_totals" in data else {
            k: sum(v) for k, v in data["per_agent"].items()}
        rows = {r["agent"]: float(r["kwh"]) for r in _csv(c.read_text())}
        assert math.isclose(rows["total"], data["total"], rel_tol=1e-5)
        for agent, value in totals.items():
            assert math.isclose(rows[agent], value, rel_tol=1e-5, abs_tol=1e-12)


def test_hourly_csv_and_json_agree(tmp_path):
    j, c = tmp_path / "h.json", tmp_path / "h.csv"
    args = ["simulate", "--config", str(TABLE1_CONFIG), "--resolution", "hourly"]
    assert main(args + ["--format", "json", "--out", str(j)]) == 0
    assert main(args + ["--format", "csv", "--out", str(c)]) == 0
    data = json.loads(j.read_text())
    for r in _csv(c.read_text()):
        series = data["total_hourly"] if r["agent"] == "total" else data["per_agent"][r["agent"]]
        assert math.isclose(float(r["kwh"]), series[int(r["hour"])], rel_tol=1e-5, abs_tol=1e-12)


# -- command line ------------------------------------------------------------

def test_simulate_daily_stdout(capsys):
    assert main(["simulate", "--config", str(TABLE1_CONFIG), "--date", "06-15"]) == 0
    rows = {r["agent"]: float(r["kwh"]) for r in _csv(capsys.readouterr().out)}
    assert set(rows) == {k.value for k in AgentKind} | {"total"}
    assert math.isclose(rows["total"], 72.745, rel_tol=0.02)


def test_simulate_uses_config_date(capsys, tmp_path):
    path = write_config(tmp_path, {"farm": FARM, "date": "01-31"})
    assert main(["simulate", "--config", str(path)]) == 0
    assert capsys.readouterr().out.splitlines()[1].startswith("01-31,")
    path = write_config(tmp_path, {"farm": FARM}, "nodate.yaml")
    assert main(["simulate", "--config", str(path)]) == 2


def test_output_path_from_config(tmp_path):
    path = write_config(tmp_path, {"farm": FARM, "date": "06-15",
                                   "output": {"path": "out/report.csv"}})
    assert main(["simulate", "--config", str(path)]) == 0
    assert (tmp_path / "out" / "report.csv").read_text().startswith("date,agent,kwh")


def test_sweep_cli(capsys):
    assert main(["sweep", "--config", str(TABLE1_CONFIG), "--herd-sizes", "35,75"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert [r["herd_size"] for r in rows] == ["35", "75"]
    assert list(rows[0]) == ["herd_size", "avg_day_kwh"]


def test_calibrate_with_rows_file(tmp_path, capsys):
    rows = tmp_path / "rows.csv"
    rows.write_text("herd_size,dssed_kwh,abm_kwh,error_pct\n40,50,50,0\n80,80,80,0\n")
    out = tmp_path / "k.json"
    assert main(["calibrate", "--rows", str(rows), "--out", str(out)]) == 0
    assert "max_residual_pct" in capsys.readouterr().out
    assert len(read_reference_rows(rows)) == 2
    payload = json.loads(out.read_text())
    assert payload["fit"]["max_residual_pct"] < 1e-9


def test_exit_codes(tmp_path, capsys):
    assert main(["validate", "--config", str(TABLE1_CONFIG)]) == 0
    with pytest.raises(SystemExit) as exc:
        main(["simulate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--config", "x", "--resolution", "weekly"])
    assert exc.value.code == 1
    assert main(["sweep", "--config", str(TABLE1_CONFIG), "--herd-sizes", "a,b"]) == 1
    bad = write_config(tmp_path, {"farm": {**FARM, "herd_size_cows": -5}})
    assert main(["simulate", "--config", str(bad), "--date", "06-15"]) == 2
    err = capsys.readouterr().err
    assert "config error" in err and "farm.herd_size_cows" in err
    assert main(["simulate", "--config", str(tmp_path / "missing.yaml")]) == 2
    # uncalibrated default constants miss the DSSED column by far
    zeros = write_config(tmp_path, {"farm": FARM, "constants": {
        "wh_base_kwh": 1.84, "cpl_harvest_kwh_per_litre": 0, "cpl_cooling_dx_kwh_per_litre": 0,
        "cpl_other_kwh_per_litre": {k.value: 0 for k in AgentKind
                                    if k.value not in ("water_heating", "milk_harvesting",
                                                       "milk_cooling")}}}, "zero.yaml")
    assert main(["validate", "--config", str(zeros)]) == 3


def test_failed_run_leaves_no_output(tmp_path):
    bad = write_config(tmp_path, {"farm": FARM, "date": "06-15", "extra": 1})
    out = tmp_path / "report.csv"
    assert main(["simulate", "--config", str(bad), "--out", str(out)]) == 2
    assert list(tmp_path.iterdir()) == [bad]


def test_atomic_write_leaves_no_temp_files(tmp_path):
    out = tmp_path / "r.json"
    assert main(["simulate", "--config", str(TABLE1_CONFIG), "--format", "json",
                 "--out", str(out)]) == 0
    assert [p.name for p in tmp_path.iterdir()] == ["r.json"]
    assert reports.from_json(out.read_text()).total > 0


def test_reports_are_byte_identical_across_runs(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["simulate", "--config", str(TABLE1_CONFIG), "--resolution", "yearly",
                     "--format", "json", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_year_json_mirrors_report_fields(farm):
    data = json.loads(reports.to_json(simulate_year(farm)))
    assert set(data) == {"label", "days", "per_agent_totals", "total"}
    assert len(data["days"]) == 365
    assert set(data["days"][0]) == {"date", "per_agent_totals", "total"}
