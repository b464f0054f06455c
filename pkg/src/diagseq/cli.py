"""Command line interface.

Thin wrappers over the model, engine, sensitivity, report, and service
modules. Machine-readable output goes to stdout, diagnostics to stderr.
Exit codes: 0 success, 2 domain errors (unknown ids, invalid inputs),
3 I/O failures (unreadable model file, unwritable output).
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import click

from . import engine
from . import report as report_mod
from .model import (
    FaultModel,
    ModelValidationError,
    Symptom,
    TestStrategy,
    bundled_dataset,
    parse_model,
)
from .sensitivity import (
    DEFAULT_SEED,
    CriticalFactorNotFound,
    SensitivityConfig,
    SensitivitySummary,
    critical_error_factor,
    diff_distribution,
)


class DomainError(click.ClickException):
    exit_code = 2


class IOFailure(click.ClickException):
    exit_code = 3


def _load_model(path: str | None) -> FaultModel:
    if path is None:
        return bundled_dataset()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IOFailure(f"cannot read model file {path}: {exc}") from exc
    try:
        return parse_model(text)
    except ModelValidationError as exc:
        raise DomainError(f"invalid model file {path}: {exc}") from exc


def _get_symptom(model: FaultModel, symptom_id: str) -> Symptom:
    try:
        return model.symptom(symptom_id)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc


def _resolve_expert(model: FaultModel, symptom_id: str, expert: str | None) -> str:
    if expert is not None:
        try:
            model.expert_rule(expert, symptom_id)
        except ValueError as exc:
            raise DomainError(str(exc)) from exc
        return expert
    rules = model.rules_for(symptom_id)
    if not rules:
        raise DomainError(f"no expert rules recorded for symptom {symptom_id!r}")
    if len(rules) > 1:
        raise DomainError(
            f"symptom {symptom_id!r} has rules from several experts "
            f"({', '.join(r.expert for r in rules)}); pass --expert"
        )
    click.echo(f"using expert rule by {rules[0].expert!r}", err=True)
    return rules[0].expert


def fmt_minutes(x: float) -> str:
    return f"{x:.1f}"


def fmt_pct(p: float) -> str:
    return f"{100.0 * p:.1f}%"


def fmt_ratio(x: float) -> str:
    """Three significant figures, no exponent notation."""
    if math.isinf(x):
        return "inf"
    if x == 0.0:
        return "0.00"
    decimals = max(0, 2 - math.floor(math.log10(abs(x))))
    return f"{x:.{decimals}f}"


def _echo_table(headers: list[str], rows: list[list[str]]) -> None:
    widths = [
        max(len(headers[i]), *(len(r[i]) for r in rows)) if rows else len(headers[i])
        for i in range(len(headers))
    ]

    def line(cells: list[str]) -> str:
        return "| " + " | ".join(c.ljust(widths[i]) for i, c in enumerate(cells)) + " |"

    click.echo(line(headers))
    click.echo("|" + "|".join("-" * (w + 2) for w in widths) + "|")
    for row in rows:
        click.echo(line(row))


def _echo_csv(headers: list[str], rows: list[list]) -> None:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    click.echo(out.getvalue(), nl=False)


def model_option(f):
    return click.option(
        "--model",
        "model_path",
        type=click.Path(),
        default=None,
        help="Fault model JSON file (default: the bundled motorcycle dataset).",
    )(f)


def format_option(f):
    return click.option(
        "--format",
        "fmt",
        type=click.Choice(["md", "csv"]),
        default="md",
        show_default=True,
        help="Output format.",
    )(f)


@click.group()
@click.version_option(package_name="diagseq")
def main():
    """Sequential diagnosis: test ordering, evaluation, and robustness."""


@main.command()
@model_option
@click.option("--symptom", required=True, help="Symptom id to sequence.")
@format_option
def sequence(model_path, symptom, fmt):
    """Print the cost/probability test order for a symptom."""
    model = _load_model(model_path)
    sym = _get_symptom(model, symptom)
    seq = engine.cp_sequence(sym)
    ec = engine.expected_cost(engine.cp_strategy(sym), sym).expected_cost
    if fmt == "csv":
        _echo_csv(
            ["rank", "component", "cost", "prob", "cp_ratio"],
            [[t.rank, t.component_id, t.cost, t.prob, t.cp_ratio] for t in seq],
        )
        click.echo(f"expected cost: {ec!r} minutes", err=True)
    else:
        _echo_table(
            ["rank", "component", "cost (min)", "prob", "c/p ratio"],
            [
                [
                    str(t.rank),
                    t.component_id,
                    fmt_minutes(t.cost),
                    fmt_pct(t.prob),
                    fmt_ratio(t.cp_ratio),
                ]
                for t in seq
            ],
        )
        click.echo(f"Expected cost: {fmt_minutes(ec)} minutes")


@main.command()
@model_option
@click.option("--symptom", required=True, help="Symptom id.")
@click.option(
    "--order",
    required=True,
    help="Comma-separated component ids, a permutation of the symptom's components.",
)
@format_option
def evaluate(model_path, symptom, order, fmt):
    """Expected cost of an arbitrary test order, with per-slot terms."""
    model = _load_model(model_path)
    sym = _get_symptom(model, symptom)
    ids = tuple(part.strip() for part in order.split(",") if part.strip())
    try:
        evaluated = engine.expected_cost(TestStrategy(sym.id, ids), sym)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    if fmt == "csv":
        _echo_csv(
            ["position", "component", "cost", "weight", "term"],
            [
                [i, t.component_id, t.cost, t.weight, t.term]
                for i, t in enumerate(evaluated.terms, start=1)
            ],
        )
        click.echo(f"expected cost: {evaluated.expected_cost!r} minutes", err=True)
    else:
        _echo_table(
            ["position", "component", "cost (min)", "weight", "term (min)"],
            [
                [
                    str(i),
                    t.component_id,
                    fmt_minutes(t.cost),
                    fmt_pct(t.weight),
                    fmt_minutes(t.term),
                ]
                for i, t in enumerate(evaluated.terms, start=1)
            ],
        )
        click.echo(f"Expected cost: {fmt_minutes(evaluated.expected_cost)} minutes")


@main.command()
@model_option
@format_option
def compare(model_path, fmt):
    """Compare every recorded expert rule against the cost/probability order."""
    model = _load_model(model_path)
    try:
        rep = report_mod.compare(model)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    click.echo(report_mod.render(rep, fmt), nl=False)


@main.command()
@model_option
@click.option("--symptom", required=True, help="Symptom id.")
def oracle(model_path, symptom):
    """Exhaustively enumerate orders and report the cheapest one."""
    model = _load_model(model_path)
    sym = _get_symptom(model, symptom)
    try:
        best, ec = engine.brute_force_optimum(sym)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    cp = engine.cp_strategy(sym)
    click.echo(f"optimal order: {', '.join(best.order)}")
    click.echo(f"expected cost: {fmt_minutes(ec)} minutes")
    match = "yes" if best.order == cp.order else "no (equal cost, different tie-break)"
    click.echo(f"matches cost/probability order: {match}")


def _parse_sweep(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise click.UsageError("--sweep expects lo:hi:step, e.g. 1.0:3.0:0.25")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError as exc:
        raise click.UsageError(f"--sweep values must be numbers: {exc}") from exc
    if lo < 1.0 or hi < lo or step <= 0.0:
        raise click.UsageError("--sweep needs 1 <= lo <= hi and step > 0")
    values = []
    k = 0
    while True:
        s = lo + k * step
        if s > hi + 1e-9:
            break
        values.append(round(s, 10))
        k += 1
    return values


def sampling_options(f):
    f = click.option(
        "--samples",
        type=click.IntRange(min=1),
        default=10000,
        show_default=True,
        help="Monte Carlo sample count.",
    )(f)
    f = click.option(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        show_default=True,
        help="Random seed; identical seeds reproduce results bit-for-bit.",
    )(f)
    f = click.option(
        "--renormalize/--no-renormalize",
        "renormalize",
        default=True,
        show_default=True,
        help="Rescale each sample's perturbed probabilities to sum to one.",
    )(f)
    return f


@main.command()
@model_option
@click.option("--symptom", required=True, help="Symptom id.")
@click.option("--expert", default=None, help="Expert whose rule to compare against.")
@click.option("--s", "s", type=float, default=2.0, show_default=True, help="Error factor.")
@click.option("--band-mass", type=float, default=0.70, show_default=True)
@click.option(
    "--emit-cdf",
    type=click.Path(),
    default=None,
    help="Write the diff CDF to this CSV file (single --s runs only).",
)
@click.option("--sweep", default=None, help="Evaluate a range of error factors, lo:hi:step.")
@sampling_options
@format_option
def sensitivity(
    model_path, symptom, expert, s, band_mass, emit_cdf, sweep, samples, seed, renormalize, fmt
):
    """Distribution of EC(expert order) - EC(cp order) under input noise."""
    model = _load_model(model_path)
    sym = _get_symptom(model, symptom)
    expert = _resolve_expert(model, sym.id, expert)
    rule = model.expert_rule(expert, sym.id)
    cp = engine.cp_strategy(sym)

    def summarize(error_factor: float) -> SensitivitySummary:
        try:
            config = SensitivityConfig(
                error_factor=error_factor,
                n_samples=samples,
                seed=seed,
                band_mass=band_mass,
                renormalize_samples=renormalize,
            )
        except ValueError as exc:
            raise DomainError(str(exc)) from exc
        return diff_distribution(sym, rule.strategy, cp, config)

    if sweep is not None:
        if emit_cdf is not None:
            raise click.UsageError("--emit-cdf requires a single --s run, not --sweep")
        summaries = [(value, summarize(value)) for value in _parse_sweep(sweep)]
        lo_level, hi_level = summaries[0][1].config.band_quantiles
        rows = [
            [
                value,
                summary.quantiles[lo_level],
                summary.quantiles[0.5],
                summary.quantiles[hi_level],
                summary.prob_positive,
            ]
            for value, summary in summaries
        ]
        headers = ["s", f"q{lo_level:g}", "median", f"q{hi_level:g}", "prob_positive"]
        if fmt == "csv":
            _echo_csv(headers, rows)
        else:
            _echo_table(
                headers,
                [
                    [
                        f"{r[0]:g}",
                        fmt_minutes(r[1]),
                        fmt_minutes(r[2]),
                        fmt_minutes(r[3]),
                        fmt_pct(r[4]),
                    ]
                    for r in rows
                ],
            )
        return

    summary = summarize(s)
    lo_level, hi_level = summary.config.band_quantiles
    if fmt == "csv":
        _echo_csv(
            ["metric", "value"],
            [
                ["nominal_diff", summary.nominal_diff],
                ["mean_diff", summary.mean_diff],
                *[[f"q{level:g}", value] for level, value in summary.quantiles.items()],
                ["prob_positive", summary.prob_positive],
            ],
        )
    else:
        click.echo(f"EC(expert) - EC(cp) for {sym.id!r} at s={s:g}, n={samples}")
        click.echo(f"nominal diff : {fmt_minutes(summary.nominal_diff)} minutes")
        click.echo(f"mean diff    : {fmt_minutes(summary.mean_diff)} minutes")
        for level, value in summary.quantiles.items():
            click.echo(f"q{level:<12g}: {fmt_minutes(value)} minutes")
        click.echo(f"P(diff > 0)  : {fmt_pct(summary.prob_positive)}")
    if emit_cdf is not None:
        try:
            with open(emit_cdf, "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["diff", "cumulative_fraction"])
                writer.writerows(summary.cdf_points)
        except OSError as exc:
            raise IOFailure(f"cannot write {emit_cdf}: {exc}") from exc
        click.echo(f"wrote CDF ({len(summary.cdf_points)} points) to {emit_cdf}", err=True)


@main.command(name="critical-s")
@model_option
@click.option("--symptom", required=True, help="Symptom id.")
@click.option("--expert", default=None, help="Expert whose rule to compare against.")
@click.option(
    "--percentile",
    type=float,
    default=0.15,
    show_default=True,
    help="Lower quantile of the diff that must reach zero.",
)
@click.option("--s-max", type=float, default=4.0, show_default=True)
@sampling_options
def critical_s(model_path, symptom, expert, percentile, s_max, samples, seed, renormalize):
    """Smallest error factor at which the advantage stops being clear-cut."""
    if not 0.0 < percentile < 0.5:
        raise DomainError(f"--percentile must be in (0, 0.5), got {percentile}")
    model = _load_model(model_path)
    sym = _get_symptom(model, symptom)
    expert = _resolve_expert(model, sym.id, expert)
    rule = model.expert_rule(expert, sym.id)
    try:
        config = SensitivityConfig(
            error_factor=1.0,
            n_samples=samples,
            seed=seed,
            band_mass=1.0 - 2.0 * percentile,
            renormalize_samples=renormalize,
        )
        star = critical_error_factor(
            sym, rule.strategy, engine.cp_strategy(sym), config, s_max=s_max
        )
    except CriticalFactorNotFound:
        click.echo(
            f"no crossing: the {percentile:g}-quantile of the diff stays positive "
            f"up to s={s_max:g} (the cost/probability order dominates)"
        )
        return
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    click.echo(
        f"critical error factor: s* = {star:.2f} "
        f"({percentile:g}-quantile of the diff reaches zero)"
    )


@main.command()
@model_option
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option(
    "--ui",
    "ui_dir",
    type=click.Path(),
    default=None,
    help="Directory of built web UI assets to serve at / "
    "(default: ./frontend/dist when present).",
)
def serve(model_path, host, port, ui_dir):
    """Run the HTTP service (API under /api/v1, optional web UI at /)."""
    import uvicorn

    from .service import create_app

    model = _load_model(model_path)
    if ui_dir is None and Path("frontend/dist").is_dir():
        ui_dir = "frontend/dist"
    if ui_dir is not None and not Path(ui_dir).is_dir():
        raise IOFailure(f"UI directory {ui_dir} does not exist")
    if ui_dir is not None:
        click.echo(f"serving web UI from {ui_dir}", err=True)
    uvicorn.run(create_app(model, ui_dir=ui_dir), host=host, port=port)


if __name__ == "__main__":
    main()
