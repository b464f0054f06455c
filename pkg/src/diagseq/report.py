"""Side-by-side comparison of recorded expert rules against the cp order.

Each row pits one expert's recorded test order for one symptom against the
cost/probability order, both evaluated on the same stored values. The
reduction column is the percent of expected minutes saved by switching.
Per-expert averages are plain arithmetic means of the per-symptom percent
reductions (not time-weighted), matching how such tables are usually read.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from . import engine
from .model import FaultModel


@dataclass(frozen=True)
class ComparisonRow:
    expert: str
    symptom_id: str
    ec_expert: float
    ec_cp: float
    reduction_pct: float


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[ComparisonRow, ...]
    average_by_expert: dict[str, float]
    overall_average: float  # mean of the per-expert averages


def make_row(
    expert: str, symptom_id: str, ec_expert: float, ec_cp: float
) -> ComparisonRow:
    """Build a row from expected costs, however they were obtained."""
    if ec_expert <= 0.0:
        raise ValueError(f"expert expected cost must be > 0, got {ec_expert}")
    return ComparisonRow(
        expert=expert,
        symptom_id=symptom_id,
        ec_expert=ec_expert,
        ec_cp=ec_cp,
        reduction_pct=100.0 * (ec_expert - ec_cp) / ec_expert,
    )


def from_rows(rows: list[ComparisonRow] | tuple[ComparisonRow, ...]) -> ComparisonReport:
    """Aggregate externally supplied rows into a report."""
    if not rows:
        raise ValueError("report needs at least one row")
    experts: list[str] = []
    for row in rows:
        if row.expert not in experts:
            experts.append(row.expert)
    averages = {
        expert: _mean([r.reduction_pct for r in rows if r.expert == expert])
        for expert in experts
    }
    return ComparisonReport(
        rows=tuple(rows),
        average_by_expert=averages,
        overall_average=_mean(list(averages.values())),
    )


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def compare(model: FaultModel) -> ComparisonReport:
    """Evaluate every recorded expert rule against the cp order.

    Both orders are evaluated on the stored assessed values for the rule's
    symptom. Rows keep the model's rule order.
    """
    if not model.expert_rules:
        raise ValueError(f"model {model.name!r} records no expert rules")
    rows = []
    for rule in model.expert_rules:
        symptom = model.symptom(rule.symptom_id)
        ec_expert = engine.expected_cost(rule.strategy, symptom).expected_cost
        ec_cp = engine.expected_cost(engine.cp_strategy(symptom), symptom).expected_cost
        rows.append(make_row(rule.expert, rule.symptom_id, ec_expert, ec_cp))
    return from_rows(rows)


def render(report: ComparisonReport, fmt: str = "md") -> str:
    """Render a report as a markdown table or CSV.

    Markdown rounds to one decimal and appends per-expert average rows;
    CSV carries full-precision data rows only, so it round-trips.
    """
    if fmt == "md":
        return _render_md(report)
    if fmt == "csv":
        return _render_csv(report)
    raise ValueError(f"unknown format {fmt!r}; expected 'md' or 'csv'")


def _render_md(report: ComparisonReport) -> str:
    header = ["expert", "symptom", "expert EC", "C/P EC", "reduction %"]
    body = [
        [
            r.expert,
            r.symptom_id,
            f"{r.ec_expert:.1f}",
            f"{r.ec_cp:.1f}",
            f"{r.reduction_pct:.1f}",
        ]
        for r in report.rows
    ]
    for expert, avg in report.average_by_expert.items():
        body.append([expert, "average reduction", "", "", f"{avg:.1f}"])
    body.append(["all experts", "average reduction", "", "", f"{report.overall_average:.1f}"])
    widths = [
        max(len(header[i]), *(len(row[i]) for row in body)) for i in range(len(header))
    ]

    def line(cells: list[str]) -> str:
        return "| " + " | ".join(c.ljust(widths[i]) for i, c in enumerate(cells)) + " |"

    rows = [line(header), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
    rows.extend(line(row) for row in body)
    return "\n".join(rows) + "\n"


def _render_csv(report: ComparisonReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["expert", "symptom", "ec_expert", "ec_cp", "reduction_pct"])
    for r in report.rows:
        # csv stringifies floats with repr, so values survive a round-trip
        writer.writerow([r.expert, r.symptom_id, r.ec_expert, r.ec_cp, r.reduction_pct])
    return out.getvalue()
