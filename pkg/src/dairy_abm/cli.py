"""Command-line entry point: ``dairy-abm {simulate,sweep,calibrate,validate}``.

Exit codes: 0 success, 1 usage error, 2 config error, 3 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import reports
from ._files import atomic_write_text
from .calibration import (
    ERROR_LIMIT_SUMMARY_PCT,
    ERROR_LIMIT_TABLE_PCT,
    CalibrationError,
    ReferenceRow,
    builtin_reference_table,
    fit_constants,
    load_constants,
    save_constants,
    truncate_one_decimal,
    validate,
)
from .model import SimDate
from .scenario import ConfigError, ScenarioFile, load_scenario, table1_farm
from .simulator import simulate_day, simulate_month, simulate_year, sweep_herd_sizes

log = logging.getLogger("dairy_abm")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_VALIDATION = 3


class StageError(Exception):
    def __init__(self, stage: str, message: str, code: int = EXIT_CONFIG):
        super().__init__(message)
        self.stage = stage
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(path: str, constants: str | None) -> ScenarioFile:
    try:
        scenario = load_scenario(path)
    except ConfigError as exc:
        raise StageError("config", str(exc)) from None
    if constants:
        try:
            k = load_constants(constants)
        except (OSError, ValueError, KeyError) as exc:
            raise StageError("config", f"constants file {constants}: {exc}") from None
        scenario = ScenarioFile(scenario.farm.with_updates(constants=k), scenario.date,
                                scenario.sweep_sizes, scenario.output_path)
    return scenario


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        atomic_write_text(out, text)
    except OSError as exc:
        raise StageError("output", f"cannot write {out}: {exc}") from None
    log.info("wrote %s", out)


def cmd_simulate(args) -> int:
    scenario = _load(args.config, args.constants)
    if args.date:
        try:
            date = SimDate.parse(args.date)
        except ValueError as exc:
            raise StageError("config", f"--date: {exc}") from None
    elif scenario.date is not None:
        date = scenario.date
    else:
        raise StageError("config", "no date given (use --date MM-DD or 'date' in the config)")

    try:
        if args.resolution in ("hourly", "daily"):
            report = simulate_day(scenario.farm, date)
        elif args.resolution == "monthly":
            report = simulate_month(scenario.farm, date.month)
        else:
            report = simulate_year(scenario.farm)
    except ValueError as exc:
        raise StageError("simulate", str(exc)) from None

    if args.format == "json":
        text = reports.to_json(report)
    elif args.resolution == "hourly":
        text = reports.hourly_csv(report)
    elif args.resolution == "daily":
        text = reports.daily_csv(report)
    else:
        text = reports.period_csv(report)
    _emit(text, Path(args.out) if args.out else scenario.output_path)
    return EXIT_OK


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise StageError("config", f"--herd-sizes: expected comma-separated integers, got {text!r}",
                         EXIT_USAGE) from None
    if not sizes or any(n < 1 for n in sizes):
        raise StageError("config", "--herd-sizes: need at least one positive herd size", EXIT_USAGE)
    return sizes


def cmd_sweep(args) -> int:
    scenario = _load(args.config, args.constants)
    if args.herd_sizes:
        sizes = _parse_sizes(args.herd_sizes)
    elif scenario.sweep_sizes:
        sizes = list(scenario.sweep_sizes)
    else:
        raise StageError("config", "no herd sizes given (use --herd-sizes or "
                                   "'sweep_herd_sizes_cows' in the config)")
    try:
        results = sweep_herd_sizes(scenario.farm, sizes)
    except ValueError as exc:
        raise StageError("simulate", str(exc)) from None
    _emit(reports.sweep_csv(results), Path(args.out) if args.out else None)
    return EXIT_OK


def read_reference_rows(path: str | Path) -> list[ReferenceRow]:
    """CSV with header ``herd_size,dssed_kwh,abm_kwh,error_pct``."""
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        expected = {"herd_size", "dssed_kwh", "abm_kwh", "error_pct"}
        if set(reader.fieldnames or ()) != expected:
            raise ValueError(f"expected columns {sorted(expected)}, got {reader.fieldnames}")
        for line in reader:
            rows.append(ReferenceRow(int(line["herd_size"]), float(line["dssed_kwh"]),
                                     float(line["abm_kwh"]), float(line["error_pct"])))
    return rows


def _rows(path: str | None) -> list[ReferenceRow]:
    if not path:
        return builtin_reference_table()
    try:
        return read_reference_rows(path)
    except (OSError, ValueError, KeyError) as exc:
        raise StageError("config", f"reference rows {path}: {exc}") from None


def cmd_calibrate(args) -> int:
    rows = _rows(args.rows)
    base = _load(args.config, None).farm if args.config else table1_farm()
    try:
        result = fit_constants(rows, base)
    except CalibrationError as exc:
        raise StageError("calibrate", str(exc)) from None
    try:
        save_constants(args.out, result)
    except OSError as exc:
        raise StageError("output", f"cannot write {args.out}: {exc}") from None
    print("herd_size,residual_pct")
    for n, pct in result.residuals.items():
        print(f"{n},{pct:.4f}")
    print(f"max_residual_pct,{result.max_residual_pct:.4f}")
    print(f"wrote {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_validate(args) -> int:
    scenario = _load(args.config, args.constants)
    report = validate(scenario.farm, _rows(args.rows))
    print("herd_size,dssed_kwh,model_kwh,error_pct,reference_abm_kwh,reference_error_pct,"
          "printed_error_pct")
    for r in report.rows:
        print(f"{r.herd_size},{r.dssed_kwh:.3f},{r.model_kwh:.3f},"
              f"{truncate_one_decimal(r.error_pct):.1f},{r.reference_abm_kwh:.3f},"
              f"{truncate_one_decimal(r.reference_error_pct):.1f},{r.printed_error_pct:.1f}")
    print(f"max_error_pct,{report.max_error_display:.1f}")
    for limit, ok in report.thresholds.items():
        print(f"within_{limit:.1f}_pct,{'yes' if ok else 'no'}")
    print(f"reference_table_consistent,{'yes' if report.table_consistent else 'no'}")
    if not report.passed:
        print(f"validate: max error {report.max_error_display:.1f}% exceeds "
              f"{ERROR_LIMIT_TABLE_PCT}%", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dairy-abm", description="Dairy farm electricity agent-based model")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate one day, month or the year")
    p.add_argument("--config", required=True)
    p.add_argument("--date", help="MM-DD; defaults to the config's date")
    p.add_argument("--resolution", choices=["hourly", "daily", "monthly", "yearly"],
                   default="daily")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.add_argument("--constants", help="constants file overriding the config's constants")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="average-day energy across herd sizes")
    p.add_argument("--config", required=True)
    p.add_argument("--herd-sizes", help="comma-separated, e.g. 35,45,55")
    p.add_argument("--out")
    p.add_argument("--constants")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("calibrate", help="fit per-litre constants to reference rows")
    p.add_argument("--rows", help="CSV herd_size,dssed_kwh,abm_kwh,error_pct "
                                  "(default: built-in table)")
    p.add_argument("--config", help="base farm (default: the 75-cow case-study farm)")
    p.add_argument("--out", default="calibrated_constants.json")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("validate", help="per-row error against the DSSED column")
    p.add_argument("--config", required=True)
    p.add_argument("--rows")
    p.add_argument("--constants")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except StageError as exc:
        print(f"dairy-abm: {exc.stage} error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
