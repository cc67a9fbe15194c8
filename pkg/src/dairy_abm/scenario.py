"""Scenario files: one farm plus optional date, sweep and output settings.

Example (YAML)::

    farm:
      herd_size_cows: 75
      milking_units: 8
      water_heating: electric        # electric | non_electric
      milk_cooling: dx               # dx | ib
      milk_per_cow_per_day_litres: 22
    date: "06-15"
    sweep_herd_sizes_cows: [35, 45, 55]
    constants_file: calibrated.json  # optional, relative to this file
    constants:                       # optional per-key overrides
      wh_base_kwh: 1.84
    schedule:
      row_time_minutes: 8
    output:
      path: out/report.csv

Unknown keys anywhere are rejected. Constants not given fall back to the
calibrated table shipped with the package.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

import yaml

from .calibration import constants_from_dict, default_constants, load_constants
from .model import (
    FarmConfig,
    MilkCoolingMode,
    ScheduleSettings,
    SimDate,
    WaterHeatingMode,
)


class ConfigError(ValueError):
    """A scenario file is malformed; the message names the offending field."""


_FARM_KEYS = {
    "herd_size_cows": "herd_size",
    "milking_units": "milking_units",
    "water_heating": "water_heating_mode",
    "milk_cooling": "milk_cooling_mode",
    "milk_per_cow_per_day_litres": "milk_per_cow_per_day",
}
_TOP_KEYS = {"farm", "date", "sweep_herd_sizes_cows", "constants_file", "constants",
             "schedule", "output"}
_OUTPUT_KEYS = {"path"}
_SCHEDULE_KEYS = {f.name for f in fields(ScheduleSettings)}


@dataclass(frozen=True)
class ScenarioFile:
    farm: FarmConfig
    date: SimDate | None = None
    sweep_sizes: tuple[int, ...] | None = None
    output_path: Path | None = None


def table1_farm() -> FarmConfig:
    """The case-study farm: 75 cows, 8 units, electric water heating, DX cooling."""
    return FarmConfig(
        herd_size=75,
        milking_units=8,
        water_heating_mode=WaterHeatingMode.ELECTRIC,
        milk_cooling_mode=MilkCoolingMode.DIRECT_EXPANSION,
        milk_per_cow_per_day=22.0,
        constants=default_constants(),
    )


TABLE1_DATE = SimDate(6, 15)


def _reject_unknown(section: str, data: Mapping, allowed: set[str]) -> None:
    for key in data:
        if key not in allowed:
            where = f"{section}.{key}" if section else str(key)
            raise ConfigError(f"unknown key '{where}'")


def _mapping(section: str, value: Any) -> Mapping:
    if not isinstance(value, Mapping):
        raise ConfigError(f"'{section}' must be a mapping")
    return value


def parse_scenario(data: Mapping, base_dir: Path | None = None) -> ScenarioFile:
    base_dir = base_dir or Path.cwd()
    data = _mapping("<root>", data)
    _reject_unknown("", data, _TOP_KEYS)
    if "farm" not in data:
        raise ConfigError("missing required section 'farm'")

    constants = default_constants()
    if "constants_file" in data:
        path = base_dir / str(data["constants_file"])
        try:
            constants = load_constants(path)
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"constants_file: cannot load {path}: {exc}") from None
    if "constants" in data:
        try:
            constants = constants_from_dict(_mapping("constants", data["constants"]), constants)
        except KeyError as exc:
            raise ConfigError(f"unknown key 'constants.{exc.args[0]}'") from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"constants: {exc}") from None

    schedule = ScheduleSettings()
    if "schedule" in data:
        sched = _mapping("schedule", data["schedule"])
        _reject_unknown("schedule", sched, _SCHEDULE_KEYS)
        try:
            schedule = ScheduleSettings(**sched)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"schedule: {exc}") from None

    farm = _mapping("farm", data["farm"])
    _reject_unknown("farm", farm, set(_FARM_KEYS))
    kwargs: dict[str, Any] = {}
    for key, attr in _FARM_KEYS.items():
        if key in farm:
            kwargs[attr] = farm[key]
    for required in ("herd_size_cows", "milking_units"):
        if required not in farm:
            raise ConfigError(f"missing required key 'farm.{required}'")
    for key, attr in _FARM_KEYS.items():
        if attr not in kwargs:
            continue
        try:
            FarmConfig(**{**_probe_defaults(), attr: kwargs[attr]})
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"farm.{key}: {exc}") from None
    config = FarmConfig(**kwargs, constants=constants, schedule=schedule)

    date = None
    if "date" in data:
        try:
            date = SimDate.parse(str(data["date"]))
        except ValueError as exc:
            raise ConfigError(f"date: {exc}") from None

    sizes = None
    if "sweep_herd_sizes_cows" in data:
        raw = data["sweep_herd_sizes_cows"]
        if not isinstance(raw, list) or not raw or not all(
                isinstance(n, int) and not isinstance(n, bool) and n >= 1 for n in raw):
            raise ConfigError("sweep_herd_sizes_cows: expected a non-empty list of positive integers")
        sizes = tuple(raw)

    output = None
    if "output" in data:
        out = _mapping("output", data["output"])
        _reject_unknown("output", out, _OUTPUT_KEYS)
        if "path" in out:
            output = base_dir / str(out["path"])

    return ScenarioFile(config, date, sizes, output)


def _probe_defaults() -> dict[str, Any]:
    # a valid farm used to check one field at a time, so errors name that field
    return {"herd_size": 1, "milking_units": 1}


def load_scenario(path: str | Path) -> ScenarioFile:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML: {exc}") from None
    if data is None:
        raise ConfigError(f"{path}: empty scenario file")
    return parse_scenario(data, path.parent)
