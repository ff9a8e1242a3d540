"""Study configuration, reports, presets, and the command-line driver."""

import numpy as np
import pytest

from parabfem.cli import main
from parabfem.harness import (CSV_COLUMNS, ConfigError, PRESETS, StudyConfig,
                              parse_report_csv, plateau_check, report_csv,
                              report_markdown, run_study)


def tiny_config(**kw):
    base = dict(example=1, mesh_sizes=(4, 8), tau_rule=("fixed", 0.25), T=0.5)
    base.update(kw)
    return StudyConfig(**base)


def test_config_validation():
    with pytest.raises(ConfigError):
        StudyConfig(example=9, mesh_sizes=(4,)).validate()
    with pytest.raises(ConfigError):
        tiny_config(scheme="C").validate()
    with pytest.raises(ConfigError):
        tiny_config(degree=3).validate()
    with pytest.raises(ConfigError):
        tiny_config(mesh_sizes=(8, 4)).validate()
    with pytest.raises(ConfigError):
        tiny_config(mesh_sizes=()).validate()
    with pytest.raises(ConfigError):
        tiny_config(tau_rule=("fixed", 0.3)).validate()  # 0.3 does not divide 0.5
    with pytest.raises(ConfigError):
        tiny_config(tau_rule=("h3", 1.0)).validate()


def test_tau_rule_coupling():
    cfg = tiny_config(mesh_sizes=(4,), tau_rule=("h2", 2.0), T=1.0)
    tau, steps = cfg.tau_for(4)
    assert tau == pytest.approx(2.0 / 16.0)
    assert steps == 8


def test_run_study_rows_and_rates():
    report = run_study(tiny_config())
    assert len(report.rows) == 2
    a, b = report.rows
    assert (a.M, b.M) == (4, 8)
    assert a.steps == b.steps == 2
    assert b.l2 < a.l2          # spatial refinement helps
    assert len(report.rates_l2) == 1
    assert report.rates_l2[0] > 0.5
    assert a.cg_iters_avg > 0
    assert a.monitor_linf_max > 0
    assert a.wall_ms > 0


def test_csv_report_schema_and_roundtrip():
    report = run_study(tiny_config(mesh_sizes=(4,)))
    text = report_csv(report)
    header = text.splitlines()[0]
    assert header == CSV_COLUMNS
    rows = parse_report_csv(text)
    assert len(rows) == 1
    r = rows[0]
    assert r["example"] == "1" and r["scheme"] == "A" and r["M"] == "4"
    assert float(r["l2_error"]) == pytest.approx(report.rows[0].l2)
    assert r["rate_l2"] == ""   # first row has no rate


def test_markdown_report_contains_table():
    report = run_study(tiny_config(mesh_sizes=(4,)))
    md = report_markdown(report)
    assert md.startswith("### Example 1")
    assert "| 4 |" in md


def test_plateau_check_orders_by_tau():
    reports = [run_study(tiny_config(tau_rule=("fixed", t)))
               for t in (0.125, 0.25)]
    rows = plateau_check(reports)
    assert [r[0] for r in rows] == [0.25, 0.125]
    assert rows[0][2] == pytest.approx(rows[0][1] / rows[1][1])
    assert rows[1][2] is None
    with pytest.raises(ConfigError):
        plateau_check(reports[:1])
    mixed = [reports[0], run_study(tiny_config(tau_rule=("h2", 1.0)))]
    with pytest.raises(ConfigError):
        plateau_check(mixed)


def test_presets_are_well_formed():
    assert set(PRESETS) == {f"table{i}" for i in range(1, 7)}
    for configs in PRESETS.values():
        for c in configs:
            c.validate()


def test_cli_writes_csv(tmp_path):
    out = tmp_path / "report.csv"
    code = main(["--example", "1", "--M", "4", "8", "--tau", "0.25",
                 "--T", "0.5", "--out", str(out)])
    assert code == 0
    rows = parse_report_csv(out.read_text())
    assert [r["M"] for r in rows] == ["4", "8"]


def test_cli_markdown_to_stdout(capsys):
    code = main(["--example", "1", "--M", "4", "--tau", "0.25",
                 "--T", "0.5", "--format", "md"])
    assert code == 0
    assert "### Example 1" in capsys.readouterr().out


def test_cli_config_error_exit_code(capsys):
    assert main(["--example", "1"]) == 3                    # no --M/--preset
    assert main(["--M", "4", "--tau", "0.3"]) == 3          # tau misfit
    assert main(["--M", "4", "--tau", "0.25", "--T", "0.5",
                 "--tau-rule", "h2:1"]) == 3                # mutually exclusive
    capsys.readouterr()


def test_cli_solver_failure_exit_code(capsys):
    # an unreachable tolerance forces the per-step solver to give up
    code = main(["--example", "1", "--M", "4", "--tau", "0.25",
                 "--T", "0.25", "--tol", "1e-300"])
    assert code == 2
    assert "solver failure" in capsys.readouterr().err
