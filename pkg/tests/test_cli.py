"""End-to-end CLI behavior through click's test runner."""

import csv
import io

import pytest
from click.testing import CliRunner

from diagseq.cli import fmt_ratio, main
from conftest import POOR_IDLING

EXPERT_ORDER = (
    "idle-speed-adjustments,clogged-speed-jet,"
    "air-leak-into-system,excess-fuel-from-accelerating-pump"
)


@pytest.fixture()
def runner():
    return CliRunner()


def parse_csv(text):
    return list(csv.reader(io.StringIO(text)))


# -- formatting helpers ---------------------------------------------------------

def test_fmt_ratio_three_significant_figures():
    assert fmt_ratio(285.7142857142857) == "286"
    assert fmt_ratio(57.03422053231939) == "57.0"
    assert fmt_ratio(28.517110266159695) == "28.5"
    assert fmt_ratio(float("inf")) == "inf"
    assert fmt_ratio(0.0) == "0.00"
    assert fmt_ratio(0.01234) == "0.0123"


def test_version(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
    assert "0.1.0" in result.stdout


# -- sequence --------------------------------------------------------------------

def test_sequence_md_golden(runner):
    result = runner.invoke(main, ["sequence", "--symptom", POOR_IDLING])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[-1] == "Expected cost: 31.6 minutes"
    first_row = lines[2]
    assert "air-leak-into-system" in first_row
    assert "52.6%" in first_row
    assert "28.5" in first_row
    assert sum("286" in line for line in lines) == 2


def test_sequence_csv_full_precision(runner):
    result = runner.invoke(main, ["sequence", "--symptom", POOR_IDLING, "--format", "csv"])
    assert result.exit_code == 0
    rows = parse_csv(result.stdout)
    assert rows[0] == ["rank", "component", "cost", "prob", "cp_ratio"]
    assert len(rows) == 5
    jet = next(r for r in rows[1:] if r[1] == "clogged-speed-jet")
    assert float(jet[2]) == 30.0
    assert float(jet[3]) == 0.105
    assert float(jet[4]) == 30.0 / 0.105
    assert result.stderr.startswith("expected cost: ")
    assert float(result.stderr.split()[2]) == pytest.approx(31.59, abs=1e-9)


def test_sequence_unknown_symptom(runner):
    result = runner.invoke(main, ["sequence", "--symptom", "warp-drive"])
    assert result.exit_code == 2
    assert "warp-drive" in result.stderr


def test_unreadable_model_file(runner):
    result = runner.invoke(
        main, ["sequence", "--model", "/nonexistent/model.json", "--symptom", POOR_IDLING]
    )
    assert result.exit_code == 3


def test_invalid_model_file(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    result = runner.invoke(
        main, ["sequence", "--model", str(bad), "--symptom", POOR_IDLING]
    )
    assert result.exit_code == 2
    assert "invalid model file" in result.stderr


def test_model_file_round_trip(runner, tmp_path, bundled):
    from diagseq.model import serialize_model

    path = tmp_path / "model.json"
    path.write_text(serialize_model(bundled))
    result = runner.invoke(
        main, ["sequence", "--model", str(path), "--symptom", POOR_IDLING]
    )
    assert result.exit_code == 0
    assert "Expected cost: 31.6 minutes" in result.stdout


# -- evaluate --------------------------------------------------------------------

def test_evaluate_expert_order(runner):
    result = runner.invoke(
        main, ["evaluate", "--symptom", POOR_IDLING, "--order", EXPERT_ORDER]
    )
    assert result.exit_code == 0
    assert result.stdout.splitlines()[-1] == "Expected cost: 49.7 minutes"
    assert "73.7%" in result.stdout
    assert "10.5%" in result.stdout


def test_evaluate_csv_terms_sum(runner):
    result = runner.invoke(
        main,
        ["evaluate", "--symptom", POOR_IDLING, "--order", EXPERT_ORDER, "--format", "csv"],
    )
    assert result.exit_code == 0
    rows = parse_csv(result.stdout)
    assert rows[0] == ["position", "component", "cost", "weight", "term"]
    terms = [float(r[4]) for r in rows[1:]]
    assert sum(terms) == pytest.approx(49.74, abs=1e-9)


def test_evaluate_rejects_partial_order(runner):
    result = runner.invoke(
        main,
        ["evaluate", "--symptom", POOR_IDLING, "--order", "idle-speed-adjustments"],
    )
    assert result.exit_code == 2
    assert "missing" in result.stderr


# -- compare ---------------------------------------------------------------------

def test_compare_md(runner):
    result = runner.invoke(main, ["compare"])
    assert result.exit_code == 0
    assert "all experts" in result.stdout
    assert "36.5" in result.stdout


def test_compare_csv(runner):
    result = runner.invoke(main, ["compare", "--format", "csv"])
    assert result.exit_code == 0
    rows = parse_csv(result.stdout)
    assert len(rows) == 6
    assert rows[0][0] == "expert"


# -- oracle ----------------------------------------------------------------------

def test_oracle_agrees_with_ratio_order(runner):
    result = runner.invoke(main, ["oracle", "--symptom", POOR_IDLING])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0].startswith("optimal order: air-leak-into-system")
    assert lines[1] == "expected cost: 31.6 minutes"
    assert lines[2] == "matches cost/probability order: yes"


# -- sensitivity -----------------------------------------------------------------

def test_sensitivity_summary_md(runner):
    result = runner.invoke(main, ["sensitivity", "--symptom", POOR_IDLING, "--s", "2.0"])
    assert result.exit_code == 0
    assert "using expert rule by 'expert-2'" in result.stderr
    lines = result.stdout.splitlines()
    assert lines[0] == f"EC(expert) - EC(cp) for '{POOR_IDLING}' at s=2, n=10000"
    assert "nominal diff : 18.2 minutes" in lines
    assert any(line.startswith("q0.15") for line in lines)
    assert any(line.startswith("q0.85") for line in lines)
    assert lines[-1].startswith("P(diff > 0)  :")


def test_sensitivity_csv_values(runner):
    result = runner.invoke(
        main,
        ["sensitivity", "--symptom", POOR_IDLING, "--s", "2.0", "--format", "csv"],
    )
    assert result.exit_code == 0
    rows = dict(parse_csv(result.stdout)[1:])
    assert float(rows["nominal_diff"]) == pytest.approx(18.15 / 0.999, abs=1e-9)
    assert float(rows["q0.15"]) > 0.0
    assert 0.0 <= float(rows["prob_positive"]) <= 1.0


def test_sensitivity_seeded_runs_are_identical(runner):
    args = [
        "sensitivity", "--symptom", POOR_IDLING, "--s", "2.0",
        "--samples", "1000", "--seed", "7", "--format", "csv",
    ]
    assert runner.invoke(main, args).stdout == runner.invoke(main, args).stdout


def test_sensitivity_emit_cdf(runner, tmp_path):
    out = tmp_path / "cdf.csv"
    result = runner.invoke(
        main,
        [
            "sensitivity", "--symptom", POOR_IDLING, "--s", "2.0",
            "--samples", "500", "--emit-cdf", str(out),
        ],
    )
    assert result.exit_code == 0
    assert "wrote CDF (500 points)" in result.stderr
    rows = parse_csv(out.read_text())
    assert rows[0] == ["diff", "cumulative_fraction"]
    assert len(rows) == 501
    fractions = [float(r[1]) for r in rows[1:]]
    assert fractions == sorted(fractions)
    assert fractions[-1] == 1.0


def test_sensitivity_emit_cdf_to_unwritable_path(runner):
    result = runner.invoke(
        main,
        [
            "sensitivity", "--symptom", POOR_IDLING, "--s", "2.0",
            "--samples", "100", "--emit-cdf", "/nonexistent-dir/cdf.csv",
        ],
    )
    assert result.exit_code == 3


def test_sensitivity_sweep(runner):
    result = runner.invoke(
        main,
        [
            "sensitivity", "--symptom", POOR_IDLING, "--sweep", "1:2:0.5",
            "--samples", "2000", "--format", "csv",
        ],
    )
    assert result.exit_code == 0
    rows = parse_csv(result.stdout)
    assert rows[0] == ["s", "q0.15", "median", "q0.85", "prob_positive"]
    assert [r[0] for r in rows[1:]] == ["1.0", "1.5", "2.0"]


def test_sensitivity_sweep_excludes_emit_cdf(runner, tmp_path):
    result = runner.invoke(
        main,
        [
            "sensitivity", "--symptom", POOR_IDLING, "--sweep", "1:2:0.5",
            "--emit-cdf", str(tmp_path / "x.csv"),
        ],
    )
    assert result.exit_code == 2


def test_sensitivity_bad_sweep_spec(runner):
    result = runner.invoke(
        main, ["sensitivity", "--symptom", POOR_IDLING, "--sweep", "2:1:0.5"]
    )
    assert result.exit_code == 2


def test_sensitivity_invalid_s(runner):
    result = runner.invoke(
        main, ["sensitivity", "--symptom", POOR_IDLING, "--s", "0.5"]
    )
    assert result.exit_code == 2


# -- critical-s ------------------------------------------------------------------

def test_critical_s_golden(runner):
    result = runner.invoke(main, ["critical-s", "--symptom", POOR_IDLING])
    assert result.exit_code == 0
    assert "critical error factor: s* = 2.86" in result.stdout


def test_critical_s_no_crossing(runner):
    result = runner.invoke(
        main, ["critical-s", "--symptom", POOR_IDLING, "--s-max", "1.1"]
    )
    assert result.exit_code == 0
    assert "no crossing" in result.stdout
    assert "cost/probability order dominates" in result.stdout


def test_critical_s_percentile_validation(runner):
    result = runner.invoke(
        main, ["critical-s", "--symptom", POOR_IDLING, "--percentile", "0.7"]
    )
    assert result.exit_code == 2


# -- serve -----------------------------------------------------------------------

def test_serve_rejects_missing_ui_dir(runner):
    result = runner.invoke(main, ["serve", "--ui", "/nonexistent-ui"])
    assert result.exit_code == 3
