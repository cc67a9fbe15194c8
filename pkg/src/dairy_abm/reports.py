"""CSV and JSON serialization of simulation reports.

CSV layouts (UTF-8, header row always present; numbers to 6 significant digits):

- hourly:  ``date,hour,agent,kwh`` with a ``total`` row after the nine agents of each hour
- daily:   ``date,agent,kwh`` with a trailing ``total`` row
- period:  ``period,agent,kwh`` with a trailing ``total`` row (monthly / yearly)
- sweep:   ``herd_size,avg_day_kwh``

JSON mirrors the report dataclasses' field names and keeps full float precision.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Mapping, Sequence

from .agents import HourlyProfile
from .model import AgentKind, SimDate
from .simulator import DailyReport, DaySummary, PeriodReport

TOTAL = "total"


def fmt(value: float) -> str:
    return f"{value:.6g}"


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def hourly_csv(report: DailyReport) -> str:
    rows = []
    for hour in range(24):
        for kind in AgentKind:
            rows.append([str(report.date), hour, kind.value, fmt(report.per_agent[kind][hour])])
        rows.append([str(report.date), hour, TOTAL, fmt(report.total_hourly[hour])])
    return _csv_text(["date", "hour", "agent", "kwh"], rows)


def daily_csv(report: DailyReport) -> str:
    totals = report.agent_totals()
    rows = [[str(report.date), kind.value, fmt(totals[kind])] for kind in AgentKind]
    rows.append([str(report.date), TOTAL, fmt(report.total)])
    return _csv_text(["date", "agent", "kwh"], rows)


def period_csv(report: PeriodReport) -> str:
    rows = [[report.label, kind.value, fmt(report.per_agent_totals[kind])] for kind in AgentKind]
    rows.append([report.label, TOTAL, fmt(report.total)])
    return _csv_text(["period", "agent", "kwh"], rows)


def sweep_csv(results: Sequence[tuple[int, float]]) -> str:
    return _csv_text(["herd_size", "avg_day_kwh"], [[n, fmt(kwh)] for n, kwh in results])


def _agent_map(mapping: Mapping[AgentKind, Any], convert=lambda v: v) -> dict[str, Any]:
    return {kind.value: convert(mapping[kind]) for kind in AgentKind}


def daily_to_dict(report: DailyReport) -> dict:
    return {
        "date": str(report.date),
        "per_agent": _agent_map(report.per_agent, lambda p: list(p.slots)),
        "total_hourly": list(report.total_hourly.slots),
        "total": report.total,
    }


def period_to_dict(report: PeriodReport) -> dict:
    return {
        "label": report.label,
        "days": [
            {"date": str(d.date), "per_agent_totals": _agent_map(d.per_agent_totals),
             "total": d.total}
            for d in report.days
        ],
        "per_agent_totals": _agent_map(report.per_agent_totals),
        "total": report.total,
    }


def daily_from_dict(data: Mapping) -> DailyReport:
    return DailyReport(
        date=SimDate.parse(data["date"]),
        per_agent={AgentKind(k): HourlyProfile(tuple(v)) for k, v in data["per_agent"].items()},
        total_hourly=HourlyProfile(tuple(data["total_hourly"])),
        total=float(data["total"]),
    )


def period_from_dict(data: Mapping) -> PeriodReport:
    return PeriodReport(
        label=data["label"],
        days=[
            DaySummary(SimDate.parse(d["date"]),
                       {AgentKind(k): float(v) for k, v in d["per_agent_totals"].items()},
                       float(d["total"]))
            for d in data["days"]
        ],
        per_agent_totals={AgentKind(k): float(v) for k, v in data["per_agent_totals"].items()},
        total=float(data["total"]),
    )


def to_json(report: DailyReport | PeriodReport) -> str:
    data = daily_to_dict(report) if isinstance(report, DailyReport) else period_to_dict(report)
    return json.dumps(data, indent=2) + "\n"


def from_json(text: str) -> DailyReport | PeriodReport:
    data = json.loads(text)
    return daily_from_dict(data) if "per_agent" in data else period_from_dict(data)
