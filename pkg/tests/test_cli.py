import json

import numpy as np
import pytest

from nlw_lab.cli import COMMANDS, _subparser, build_parser, main
from nlw_lab.spectral.io import read_field


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_exponents(tmp_path, capsys):
    code, cap = run(["exponents", "--n", "3", "--p", "2", "--s", "1.75", "--out", str(tmp_path)], capsys)
    assert code == 0
    d = json.loads(cap.out)
    assert d["delta"] == pytest.approx(0.125, abs=1e-15) and d["delta1"] == 0.0
    assert (tmp_path / "config-echo.json").exists()


def test_spectral_selftest(tmp_path, capsys):
    code, cap = run(["spectral-selftest", "--N", "512", "--out", str(tmp_path)], capsys)
    assert code == 0 and json.loads(cap.out)["pass"] is True
    assert (tmp_path / "summary.csv").read_text().startswith("check,error,tolerance,pass")


def test_lifespan_ode_oracle(tmp_path, capsys):
    code, _ = run(["lifespan", "--n", "3", "--p", "2", "--profile", "constant", "--lambda", "1",
                   "--out", str(tmp_path)], capsys)
    assert code == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    assert 0.98 <= rep["T_high"] <= 1.02 and rep["ode_oracle"]["pass"]


def test_config_echo_reproduces_run(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["weight-check", "--n", "3", "--kind", "paper", "--delta", "0.125", "--out", str(a)], capsys)[0] == 0
    echo = json.loads((a / "config-echo.json").read_text())
    echo["out"] = str(b)
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(echo))
    assert run(["weight-check", "--config", str(cfg)], capsys)[0] == 0
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    assert (a / "summary.csv").exists() == (b / "summary.csv").exists()
    echo_b = json.loads((b / "config-echo.json").read_text())
    assert {k: v for k, v in echo_b.items() if k not in ("out", "config")} == \
        {k: v for k, v in echo.items() if k not in ("out", "config")}


def test_explicit_flag_overrides_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 3, "p": 2.0, "s": 1.75}))
    code, cap = run(["exponents", "--config", str(cfg), "--s", "1.9", "--out", str(tmp_path / "o")], capsys)
    assert code == 0 and json.loads(cap.out)["s"] == 1.9


def test_usage_errors_exit_2(tmp_path, capsys):
    assert run(["exponents", "--bogus", "1"], capsys)[0] == 2
    assert run(["no-such-command"], capsys)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"not_a_flag": 1}))
    code, cap = run(["exponents", "--config", str(bad), "--out", str(tmp_path)], capsys)
    assert code == 2 and "not_a_flag" in cap.err
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"subcommand": "solve"}))
    assert run(["exponents", "--config", str(wrong), "--out", str(tmp_path)], capsys)[0] == 2
    assert run(["exponents", "--p", "0.5", "--out", str(tmp_path)], capsys)[0] == 2


def test_node_cap_is_a_usage_error(tmp_path, capsys):
    code, cap = run(["solve", "--dr", "0.001", "--max-n", "1000", "--out", str(tmp_path)], capsys)
    assert code == 2 and "max-n" in cap.err


def test_refusal_exits_1(tmp_path, capsys):
    code, cap = run(["ineq-trace", "--s", "1.6", "--size", "4", "--N", "256", "--out", str(tmp_path)], capsys)
    assert code == 1
    assert json.loads((tmp_path / "report.json").read_text())["refused"] is True


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_help_lists_every_flag_with_default(name):
    sub = _subparser(build_parser(), name)
    text = sub.format_help()
    for action in sub._actions:
        if action.dest == "help":
            continue
        for opt in action.option_strings:
            assert opt in text
        assert action.help and "default:" in text


def test_solve_writes_readable_snapshots(tmp_path, capsys):
    code, _ = run(["solve", "--n", "3", "--eps", "0.1", "--t-max", "2", "--dr", "0.1", "--snapshots", "3",
                   "--out", str(tmp_path)], capsys)
    assert code == 0
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert len(man["snapshots"]) == 3
    snap = man["snapshots"][-1]
    u = read_field(tmp_path / snap["u"])
    assert u.grid.n == 3 and np.all(np.isfinite(u.samples))


def test_report_aggregates(tmp_path, capsys):
    run(["exponents", "--out", str(tmp_path / "runs" / "e")], capsys)
    run(["ineq-trace", "--s", "1.6", "--size", "4", "--N", "256", "--out", str(tmp_path / "runs" / "t")], capsys)
    code, _ = run(["report", "--inputs", str(tmp_path / "runs"), "--out", str(tmp_path / "agg")], capsys)
    rep = json.loads((tmp_path / "agg" / "report.json").read_text())
    assert code == 1 and {r["run"]: r["pass"] for r in rep["runs"]}["t"] is False


def test_jobs_env_fallback(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("NLW_LAB_JOBS", "0")
    assert run(["exponents", "--out", str(tmp_path)], capsys)[0] == 2
    monkeypatch.setenv("NLW_LAB_JOBS", "1")
    assert run(["exponents", "--out", str(tmp_path)], capsys)[0] == 0
