import json
import subprocess
import sys

import pytest

from dunklrad import __version__
from dunklrad.cli import parse_range, read_config, run, InputError

PITT = ["pitt-verify", "--d", "3", "--gamma", "0", "--p", "2", "--q", "2", "--alpha", "-1",
        "--family", "gaussian"]


def _report(tmp_path, argv, name="out.json"):
    path = tmp_path / name
    code = run(argv + ["--output", str(path)])
    return code, json.loads(path.read_text(encoding="utf-8"))


def test_bp_check_example(tmp_path):
    code, rep = _report(tmp_path, ["bp-check", "--weight", "power:-0.5", "--p", "2"])
    assert code == 0
    assert rep["verdict"] == "member"
    assert rep["result"]["sup"] == pytest.approx(1 / 3, rel=1e-12)
    assert rep["version"] == __version__
    assert rep["config"]["weight"] == "power:-0.5" and rep["config"]["p"] == 2.0


def test_pitt_example(tmp_path):
    code, rep = _report(tmp_path, PITT + ["--beta", "1"])
    assert code == 0
    assert rep["verdict"] == "finite" and rep["result"]["admissible"] is True
    assert rep["result"]["ratio"] == pytest.approx(1.0, rel=1e-8)


def test_pitt_inadmissible_exit_code(capsys):
    assert run(PITT + ["--beta", "2"]) == 2
    err = capsys.readouterr().err
    assert "alpha/q + beta/p" in err and "residual" in err


def test_expect(tmp_path):
    argv = ["bp-check", "--weight", "power:-0.5", "--p", "2", "--output", str(tmp_path / "a")]
    assert run(argv + ["--expect", "member"]) == 0
    assert run(argv + ["--expect", "non_member"]) == 1


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("# bp example\nweight = power:0.5\np=3\n")
    code, rep = _report(tmp_path, ["bp-check", "--config", str(cfg)])
    assert rep["config"]["p"] == 3.0 and rep["verdict"] == "member"
    assert rep["result"]["sup"] == pytest.approx(1.5 / 1.5)
    code, rep = _report(tmp_path, ["bp-check", "--config", str(cfg), "--p", "1.5"])
    assert rep["config"]["p"] == 1.5 and rep["verdict"] == "non_member"


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour=blue\n")
    assert run(["bp-check", "--config", str(bad)]) == 2
    bad.write_text("just words\n")
    with pytest.raises(InputError):
        read_config(bad)
    assert run(["bp-check", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_input_errors(capsys):
    assert run(["bp-check", "--weight", "gauss:1"]) == 2
    assert run(["bp-check", "--weight", "power:0", "--p", "1"]) == 2
    assert run(["thm1-verify", "--d", "3", "--p", "2", "--q", "2", "--alpha", "-1"]) == 2
    assert run(["transform", "--d", "0"]) == 2
    assert run(["transform", "--grid", "1:0:5"]) == 2
    assert run(["besov-verify", "--d", "3", "--p", "2", "--q", "2", "--alpha", "-0.5",
                "--beta", "0"]) == 2
    assert "missing required parameter" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        run([])
    assert exc.value.code == 2


def test_divergence_is_reported_not_raised(tmp_path):
    code, rep = _report(tmp_path, ["rearrange", "--d", "2", "--weight", "power:1"])
    assert code == 0
    assert rep["verdict"] == "divergent" and rep["result"]["side"] == "level_set"


def test_transform_csv(tmp_path):
    csv_path = tmp_path / "t.csv"
    code, rep = _report(tmp_path, ["transform", "--d", "3", "--family", "indicator",
                                   "--grid", "0.1:10:5", "--csv", str(csv_path)])
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "s,value,error_estimate" and len(lines) == 6
    assert csv_path.read_bytes().endswith(b"\n")
    assert rep["result"]["grid"][0] == pytest.approx(0.1)


def test_rearrange_power_weight(tmp_path):
    code, rep = _report(tmp_path, ["rearrange", "--d", "3", "--gamma", "1",
                                   "--weight", "power:-1"])
    assert rep["result"]["closed_form_max_rel_error"] < 1e-12


def test_necessity_probe_command(tmp_path):
    code, rep = _report(tmp_path, ["necessity-probe", "--d", "3", "--p", "2", "--q", "2",
                                   "--alpha", "-1", "--beta", "1", "--r", "0.5",
                                   "--expect", "holds"])
    assert code == 0 and rep["result"]["chain_holds"]


def test_hardy_and_hlp_commands(tmp_path):
    base = ["hardy-check", "--mu", "power:-0.5", "--p", "2", "--q", "2", "--condition", "A"]
    code, rep = _report(tmp_path, base + ["--theta", "power:-0.5"])
    assert rep["verdict"] == "finite"
    code, rep = _report(tmp_path, base + ["--theta", "power:0.5"])
    assert rep["verdict"] == "infinite"
    code, rep = _report(tmp_path, ["hlp-verify", "--d", "2", "--family", "indicator"])
    assert rep["result"]["ratio"] == pytest.approx(1.0, abs=1e-7)


def test_sweep_flags_inadmissible_rows(tmp_path):
    csv_path = tmp_path / "s.csv"
    code, rep = _report(tmp_path, ["sweep", "--target", "pitt-verify", "--d", "3", "--p", "2",
                                   "--q", "2", "--vary", "beta=0.5,1,2", "--vary", "alpha=-1",
                                   "--csv", str(csv_path)])
    rows = csv_path.read_text().splitlines()
    assert rows[0] == "index,beta,alpha,verdict,status,lhs,rhs,ratio,sup"
    status = [r.split(",")[4] for r in rows[1:]]
    assert status == ["inadmissible", "ok", "inadmissible"]
    assert rep["result"]["status_counts"] == {"inadmissible": 2, "ok": 1}


def test_sweep_constraint_consistent_ratio_bounded(tmp_path):
    csv_path = tmp_path / "s.csv"
    run(["sweep", "--target", "pitt-verify", "--d", "3", "--p", "2", "--q", "2",
         "--vary", "alpha=-2.5:-0.5:5", "--solve", "beta", "--csv", str(csv_path),
         "--output", str(tmp_path / "s.json")])
    rows = [r.split(",") for r in csv_path.read_text().splitlines()[1:]]
    assert [r[4] for r in rows] == ["ok"] * 5
    assert all(0.5 < float(r[7]) < 3.0 for r in rows)


def test_sweep_empty_range_gives_header_only(tmp_path):
    csv_path = tmp_path / "e.csv"
    code, rep = _report(tmp_path, ["sweep", "--target", "bp-check", "--weight", "power:0",
                                   "--vary", "p=2:3:0", "--csv", str(csv_path)])
    assert code == 0
    assert csv_path.read_text() == "index,p,verdict,status,lhs,rhs,ratio,sup\n"
    assert rep["result"]["n_rows"] == 0


def test_sweep_limits():
    base = ["sweep", "--target", "bp-check", "--weight", "power:0"]
    assert run(base + ["--vary", "p=2", "--vary", "q=2", "--vary", "d=1"]) == 2
    assert run(base) == 2
    assert run(base + ["--vary", "family=1"]) == 2
    assert run(["sweep", "--target", "transform", "--vary", "p=2"]) == 2


def test_parse_range():
    assert parse_range("alpha=-1:1:3") == ("alpha", [-1.0, 0.0, 1.0])
    assert parse_range("d=1,2") == ("d", [1, 2])
    assert parse_range("p=") == ("p", [])


@pytest.mark.parametrize("argv", [
    ["bp-check", "--weight", "power:-0.5", "--p", "2"],
    PITT + ["--beta", "1"],
    ["sweep", "--target", "thm1-verify", "--d", "3", "--p", "2", "--q", "2",
     "--vary", "beta=0.5,1", "--vary", "alpha=-1", "--family", "indicator"],
])
def test_reports_are_byte_identical(tmp_path, argv):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    ca, cb = tmp_path / "a.csv", tmp_path / "b.csv"
    run(argv + ["--output", str(a), "--csv", str(ca)])
    run(argv + ["--output", str(b), "--csv", str(cb)])
    assert a.read_bytes() == b.read_bytes()
    if ca.exists():
        assert ca.read_bytes() == cb.read_bytes()


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "dunklrad.cli", "bp-check", "--weight",
                          "power:-0.5", "--p", "2"], capture_output=True, text=True, check=True)
    rep = json.loads(out.stdout)
    assert rep["verdict"] == "member"
    keys = list(rep)
    assert keys == sorted(keys)
