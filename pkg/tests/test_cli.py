import json
import subprocess
import sys

import pytest
from jsonschema import validate

from smallball.cli import REPORT_SCHEMA, main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_rho_subcommand(capsys):
    code, out = run_cli(["rho", "--entries", "1,1,1,1"], capsys)
    assert code == 0
    report = json.loads(out)
    validate(report, REPORT_SCHEMA)
    assert report["results"]["rho"] == "3/8"


def test_empty_entries_exit_code(capsys):
    assert run_cli(["rho", "--entries", ""], capsys)[0] == 2


def test_budget_exit_code(capsys):
    code, _ = run_cli(["singularity", "--n", "8", "--mode", "exact"], capsys)
    assert code == 3


def test_singularity_exact_n2(capsys):
    code, out = run_cli(["singularity", "--n", "2", "--mode", "exact"], capsys)
    assert code == 0
    assert json.loads(out)["results"]["exact_value"] == "1/2"


def test_reports_byte_identical(capsys):
    args = ["common-roots", "--n", "5", "--trials", "50", "--seed", "9"]
    _, out1 = run_cli(args, capsys)
    _, out2 = run_cli(args, capsys)
    assert out1 == out2
    validate(json.loads(out1), REPORT_SCHEMA)


def test_all_bound_commands_sound(capsys):
    code, out = run_cli(["esseen", "--entries", "1,1,1,1", "--beta", "1"], capsys)
    assert code == 0
    res = json.loads(out)["results"]
    assert res["ratio"] >= 1
    code, out = run_cli(["fp-bound", "--entries", "1,2,3"], capsys)
    assert code == 0
    assert json.loads(out)["results"]["ratio"] >= 1
    code, out = run_cli(["rv-bound", "--entries", "1,1,1,1", "--beta", "2",
                         "--alpha", "2", "--gamma", "1/2"], capsys)
    assert code == 0


def test_various_subcommands(capsys):
    cases = [
        ["dist", "--entries", "1,2", "--format", "csv"],
        ["ball", "--entries", "1,2,3", "--radius", "1/2"],
        ["ball2d", "--entries", "1,0, 0,1", "--radius", "1"],
        ["flat", "--entries", "1,0, 2,0, 3,0", "--angle-grid", "8"],
        ["stanley", "--n-list", "3,5"],
        ["levels", "--entries", "1,1,1", "--m-max", "2"],
        ["rl", "--entries", "1,2,3,4", "--l", "2"],
        ["lcd", "--entries", "2,2", "--alpha", "1/12", "--gamma", "1/2"],
        ["recurrence", "--entries", "1,1,1", "--t", "1/8", "--gamma", "1/2",
         "--alpha", "1/2", "--grid-points", "5001"],
        ["gap-fit", "--entries", "1,2,3,4,5,6"],
        ["gap-forward", "--generators", "1", "--bounds", "5", "--n", "8"],
        ["census", "--n", "2", "--max-entry", "2", "--rho-grid", "1/2,1/4"],
        ["geo-rho", "--x", "2", "--n", "4"],
        ["geo-rho", "--quad", "1,1", "--n", "4"],
        ["quad-rho", "--matrix", "1,1;1,1"],
        ["decouple", "--matrix", "1,1;1,1", "--u1", "0", "--x", "0"],
        ["quad-gen", "--kind", "lowrank", "--n", "6", "--k", "1,-1,1,-1,1,-1"],
        ["multi-rho", "--poly", "1: 0 1;1: 2 3", "--n", "4", "--x", "1"],
        ["parity-cor", "--poly", "1: 0", "--n", "6"],
        ["universal", "--d", "10", "--n", "5", "--k", "1", "--trials", "20"],
        ["lsv", "--kind", "gaussian_iid", "--n", "10", "--trials", "5"],
        ["edelman", "--t", "0.5"],
        ["common-roots", "--n", "3", "--trials", "50"],
    ]
    for args in cases:
        code, out = run_cli(args, capsys)
        assert code == 0, args
        if "--format" not in args:
            validate(json.loads(out), REPORT_SCHEMA)


def test_sweep_stanley(capsys):
    code, out = run_cli(["sweep", "--sub", "stanley", "--grid",
                         "n-list=3,5,7"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 4  # header + 3 cells
    assert lines[0].startswith("n-list")


def test_sweep_empty_grid(capsys):
    code, out = run_cli(["sweep", "--sub", "edelman", "--grid", "t=0.1,0.2,0.3"],
                        capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 4


def test_sweep_partial_failure_flagged(capsys):
    code, out = run_cli(["sweep", "--sub", "rho", "--grid",
                         "entries=1,bad,2"], capsys)
    assert code == 0
    assert "error" in out
    assert out.count("ok") == 2  # run continues past the failing cell


def test_sweep_census_monotone(capsys):
    code, out = run_cli(["sweep", "--sub", "census", "--grid", "n=2,3",
                         "--fixed", "max-entry=4",
                         "--fixed", "rho-grid=1/2,1/4,0"], capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 1 + 6


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("radius = 1\n")
    code, out = run_cli(["ball", "--entries", "1,1,1,1", "--radius", "0",
                         "--config", str(cfg)], capsys)
    # flag wins over config
    assert json.loads(out)["results"]["p"] == "3/8"
    cfg2 = tmp_path / "run2.cfg"
    cfg2.write_text("l = 2\n")
    code, out = run_cli(["rl", "--entries", "1,2,3,4", "--config", str(cfg2)],
                        capsys)
    assert json.loads(out)["results"]["r_l"] == 44
    cfg3 = tmp_path / "bad.cfg"
    cfg3.write_text("nonsense = 1\n")
    assert run_cli(["rl", "--entries", "1", "--config", str(cfg3)], capsys)[0] == 2


def test_cli_process_invocation():
    proc = subprocess.run(
        [sys.executable, "-m", "smallball.cli", "rho", "--entries", "1,1"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["rho"] == "1/2"


def test_version_flag():
    proc = subprocess.run(
        [sys.executable, "-m", "smallball.cli", "--version"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "schema 1" in proc.stdout
