import json
import subprocess
import sys

import pytest

from blockcomp.cli import main, run_asp
from blockcomp.export import read_qasm, stats

CONFIG = {"family": "tfim", "n": 5, "couplings": {"a": -2.0, "b": -1.0}, "schedule": {"dt": 0.05, "steps": 1000}}


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "tfim.json"
    path.write_text(json.dumps(CONFIG))
    return path


def test_compile_constant_schedule_uses_squaring(config, tmp_path):
    qasm, st = tmp_path / "out.qasm", tmp_path / "stats.json"
    assert main(["compile", "--config", str(config), "--qasm", str(qasm), "--stats", str(st)]) == 0
    doc = json.loads(st.read_text())
    (report,) = doc["compression"]
    assert report["path"] == "ti" and report["r"] == 1000
    # 1000 = 0b1111101000: 9 squarings and 5 accumulator merges of height-9 triangles
    assert report["turnovers"] == (9 + 5) * 9 * 80 // 6
    assert doc["cnots"] == 40
    gates, n = read_qasm(qasm.read_text())
    assert n == 5 and stats(gates).cnots == 40


def test_compile_embedded_halves_cnots(config, tmp_path):
    st = tmp_path / "s.json"
    assert main(["compile", "--config", str(config), "--embed", "--qasm", str(tmp_path / "q"), "--stats", str(st)]) == 0
    assert json.loads(st.read_text())["cnots"] == 20


def test_compile_single_step_and_forced_path(config, tmp_path):
    st = tmp_path / "s.json"
    assert main(["compile", "--config", str(config), "--steps", "1", "--path", "td", "--qasm", str(tmp_path / "q"), "--stats", str(st)]) == 0
    (report,) = json.loads(st.read_text())["compression"]
    assert report["path"] == "td" and report["turnovers"] == 0


def test_compile_is_deterministic(config, tmp_path):
    outs = []
    for k in range(2):
        q = tmp_path / f"q{k}"
        s = tmp_path / f"s{k}"
        main(["compile", "--config", str(config), "--steps", "20", "--qasm", str(q), "--stats", str(s)])
        outs.append((q.read_bytes(), s.read_bytes()))
    assert outs[0] == outs[1]


def test_time_dependent_config(tmp_path):
    doc = {
        "family": "kitaev",
        "n": 4,
        "schedule": {"kind": "piecewise-linear", "dt": 0.1, "steps": 5,
                     "samples": [{"t": 0.0, "couplings": {"a": 0.0}}, {"t": 0.5, "couplings": {"a": 1.0}}]},
    }
    path = tmp_path / "k.json"
    path.write_text(json.dumps(doc))
    st = tmp_path / "s.json"
    assert main(["compile", "--config", str(path), "--qasm", str(tmp_path / "q"), "--stats", str(st)]) == 0
    assert json.loads(st.read_text())["compression"][0]["path"] == "td"
    assert main(["compile", "--config", str(path), "--path", "ti"]) == 1


def test_invalid_inputs_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({**CONFIG, "colour": "red"}))
    assert main(["compile", "--config", str(bad)]) == 1
    assert "colour" in capsys.readouterr().err
    assert main(["compile", "--config", str(tmp_path / "missing.json")]) == 1
    assert main(["compile"]) == 1
    assert main(["verify"]) == 1


def test_stats_command(config, tmp_path, capsys):
    assert main(["stats", "--config", str(config), "--steps", "4", "--style", "rotations"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["rotations"] == 20 and doc["cnots"] == 0
    q = tmp_path / "q.qasm"
    main(["compile", "--config", str(config), "--steps", "4", "--qasm", str(q)])
    capsys.readouterr()
    assert main(["stats", "--qasm-in", str(q)]) == 0
    assert json.loads(capsys.readouterr().out)["cnots"] == 40


@pytest.mark.parametrize("family", ["kitaev", "xy", "tfim", "tfxy", "gen-tfxy"])
def test_verify_passes(family, capsys):
    assert main(["verify", "--family", family, "--n", "5", "--steps", "20", "--trials", "3"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_verify_zero_dt_is_exact(capsys):
    assert main(["verify", "--family", "tfxy", "--n", "4", "--dt", "0", "--trials", "2"]) == 0
    assert "max distance 0.000e+00" in capsys.readouterr().out


def test_verify_negative_control_and_cap():
    assert main(["verify", "--family", "tfxy", "--n", "4", "--trials", "1", "--corrupt"]) == 2
    assert main(["verify", "--family", "tfim", "--n", "13", "--trials", "1"]) == 3


def test_asp_csv(tmp_path):
    out = tmp_path / "asp.csv"
    argv = ["asp", "--n", "3", "--ramp", "1", "--tail", "0.5", "--dt", "0.1", "--snap", "0.5", "--out", str(out)]
    assert main(argv) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,m_compressed,m_exact_instantaneous_gs,m_target_final"
    assert [float(row.split(",")[0]) for row in lines[1:]] == [0.0, 0.5, 1.0, 1.5]
    first = lines[1].split(",")
    assert float(first[1]) == 1.0 and float(first[2]) == pytest.approx(1.0)
    text = out.read_text()
    assert main(argv + ["--jobs", "2"]) == 0
    assert out.read_text() == text


def test_asp_exact_columns_do_not_depend_on_dt():
    a = run_asp(n=3, ramp=1.0, tail=0.0, dt=0.1, snap=0.5)
    b = run_asp(n=3, ramp=1.0, tail=0.0, dt=0.05, snap=0.5)
    assert [r["m_exact_instantaneous_gs"] for r in a] == [r["m_exact_instantaneous_gs"] for r in b]
    assert [r["m_compressed"] for r in a] != [r["m_compressed"] for r in b]


def test_asp_diabatic_ramp_misses_target():
    (row,) = run_asp(n=5, ramp=0.1, tail=0.0, dt=0.05, snap=1.0, times=[0.1])
    assert abs(row["m_compressed"] - row["m_target_final"]) > 0.1


def test_asp_bad_parameters():
    assert main(["asp", "--ramp", "0"]) == 1
    assert main(["asp", "--n", "13"]) == 3


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "blockcomp.cli", "verify", "--family", "kitaev", "--n", "3", "--trials", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS" in proc.stdout
