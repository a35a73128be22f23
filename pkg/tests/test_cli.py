import csv
import json
import subprocess
import sys

import pytest

from selfrepair import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_config(tmp_path, body, name="c.ini"):
    path = tmp_path / name
    path.write_text(f"[campaign]\nseed = 5\nout = {tmp_path / 'res'}\n\n{body}")
    return path


def test_analyze_twod(capsys):
    code, out, _ = run(capsys, "analyze", "--twod", "4")
    assert code == 0
    assert "f1 = 11/12" in out and "N = 10, n_f = 2" in out


@pytest.mark.parametrize("flag", [("--raid6", "1x12"), ("--raid6", "3x6"), ("--tp", "2x15")])
def test_analyze_groups_agree_with_closed_form(capsys, flag):
    code, out, _ = run(capsys, "analyze", *flag)
    assert code == 0
    assert "verdict: closed-form = enumeration" in out


def test_analyze_refuses_over_budget(capsys):
    code, _, err = run(capsys, "analyze", "--twod", "12", "--budget", "1000")
    assert code == cli.EXIT_CONFIG
    assert "refusing" in err


def test_analyze_sampling_fallback(capsys):
    code, out, _ = run(capsys, "analyze", "--twod", "12", "--budget", "1000",
                       "--allow-sampling", "--samples", "2000", "--seed", "1")
    assert code == 0 and "~" in out


def test_analyze_dump(capsys, tmp_path):
    code, _, _ = run(capsys, "analyze", "--raid6", "2x12", "--out", str(tmp_path))
    assert code == 0
    rows = list(csv.DictReader((tmp_path / "profiles.csv").open()))
    assert [r["method"] for r in rows][1] == "closed-form"
    assert rows[0]["f1_num"] == rows[1]["f1_num"] and rows[0]["N"] == "24"
    data = json.loads((tmp_path / "profiles.json").read_text())
    assert data[0]["n_f"] == 2


def test_simulate_writes_csv_and_json(capsys, tmp_path):
    cfg = write_config(tmp_path, "[small]\nscheme = twod:5\nspares = 3\nruns = 2000\n\n"
                                 "[groups]\nscheme = raid6:2x6\nspares = unlimited\nruns = 2000\n")
    code, out, _ = run(capsys, "simulate", str(cfg))
    assert code == 0 and "[small]" in out and "[groups]" in out
    rows = list(csv.DictReader((tmp_path / "res" / "results.csv").open()))
    assert [r["scheme"] for r in rows] == ["twod:5", "raid6:2x6"]
    assert list(rows[0]) == cli.CSV_COLUMNS
    assert rows[1]["spares"] == "unlimited" and rows[0]["wall_time"]
    rec = json.loads((tmp_path / "res" / "small.json").read_text())
    assert rec["runs"] == 2000 and rec["config"]["spares"] == 3
    assert rec["losses"] == int(rows[0]["losses"])


def test_simulate_no_timing_is_reproducible(capsys, tmp_path):
    cfg = write_config(tmp_path, "[a]\nscheme = tp:1x7\nspares = 2\nruns = 3000\n")
    outs = []
    for d in ("x", "y"):
        assert run(capsys, "simulate", str(cfg), "--no-timing", "--out", str(tmp_path / d))[0] == 0
        outs.append((tmp_path / d / "results.csv").read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("body", ["[a]\nscheme = twod:5\nruns = 0\n",
                                  "[a]\nscheme = twod:5\nwobble = 1\n"])
def test_simulate_bad_config_exits_nonzero(capsys, tmp_path, body):
    code, _, err = run(capsys, "simulate", str(write_config(tmp_path, body)))
    assert code == cli.EXIT_CONFIG and "config error" in err
    assert not (tmp_path / "res").exists()


def test_simulate_missing_file(capsys, tmp_path):
    assert run(capsys, "simulate", str(tmp_path / "nope.ini"))[0] == cli.EXIT_CONFIG


def test_runs_override_rejected_when_zero(capsys, tmp_path):
    cfg = write_config(tmp_path, "[a]\nscheme = twod:5\n")
    assert run(capsys, "simulate", str(cfg), "--runs", "0")[0] == cli.EXIT_CONFIG


def test_sweep_unreachable_exits_zero(capsys):
    code, out, _ = run(capsys, "sweep", "--twod", "4", "--target", "9", "--runs", "500")
    assert code == 0 and "unreachable" in out and "spares     ∞" in out


def test_sweep_finds_spares(capsys):
    code, out, _ = run(capsys, "sweep", "--twod", "4", "--target", "1", "--runs", "2000")
    assert code == 0 and "minimal spares:" in out


def test_table_small_runs(capsys):
    code, out, _ = run(capsys, "table", "3", "--runs", "1000")
    assert code == 0
    assert "overhead differs" not in out
    for printed in ("57.14%", "58.62%", "52.00%", "49.30%", "50.00%"):
        assert printed in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "selfrepair", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "simulate" in res.stdout
