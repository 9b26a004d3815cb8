import csv
import io
import json
import subprocess
import sys

import pytest

from bersdec import cli, surface
from bersdec.errors import ConfigError
from bersdec.experiments import ExperimentConfig, random_surface, rng_for, sweep


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "gen", "--seed", "1", "--n", "6", "--out", str(a))[0] == 0
    assert run(capsys, "gen", "--seed", "1", "--n", "6", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    s = surface.loads(a.read_text())
    assert s.n == 6


def test_gen_n3_is_error(capsys):
    code, _, err = run(capsys, "gen", "--n", "3")
    assert code == 1 and "ConfigError" in err


def test_gen_cone_traces(capsys, tmp_path):
    f = tmp_path / "c.json"
    run(capsys, "gen", "--n", "8", "--kind", "cone_pi", "--out", str(f))
    s = surface.loads(f.read_text())
    assert all(abs(float(m.tr)) <= 1e-8 for m in s.holonomy_mp)


def test_decompose_n4(capsys, tmp_path):
    f = tmp_path / "s4.json"
    f.write_text(surface.dumps(surface.build_surface([surface.CUSP] * 4, [(1, 2)], [(1.0, 0.0)])))
    code, out, _ = run(capsys, "decompose", str(f))
    doc = json.loads(out)
    assert code == 0 and doc["certificate"]["within_bound"]
    assert len(doc["decomposition"]["curves"]) == 1


def test_decompose_seed1_n12(capsys, tmp_path):
    f = tmp_path / "s12.json"
    run(capsys, "gen", "--seed", "1", "--n", "12", "--out", str(f))
    code, out, _ = run(capsys, "decompose", str(f))
    cert = json.loads(out)["certificate"]
    assert code == 0 and cert["within_bound"] and cert["bound"] == pytest.approx(237.8, abs=0.05)


def test_decompose_corrupt_file(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"punctures": [')
    code, _, err = run(capsys, "decompose", str(f))
    assert code == 1 and "ParseError" in err


def test_sweep_csv_is_reproducible(capsys):
    argv = ("sweep", "--n", "5-6", "--trials", "2", "--seed", "7")
    c1, out1, _ = run(capsys, *argv)
    c2, out2, _ = run(capsys, *argv)
    assert c1 == c2 == 0 and out1 == out2
    rows = list(csv.DictReader(io.StringIO(out1)))
    assert len(rows) == 5 and rows[-1]["seed"] == "summary"
    assert rows[0].keys() >= {"seed", "n", "kind", "max_len", "bound", "ratio", "certified_split_all", "time_ms"}
    assert all(0 < float(r["ratio"]) < 1 for r in rows[:-1])


def test_sweep_empty_range(capsys):
    code, _, err = run(capsys, "sweep", "--n", "")
    assert code == 1 and "empty" in err


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(n_values=())
    with pytest.raises(ConfigError):
        ExperimentConfig(low=0.0)
    with pytest.raises(ConfigError):
        ExperimentConfig(trials=0)


def test_sweep_seeds_are_schedule_independent(monkeypatch):
    cfg = ExperimentConfig(seed=3, n_values=(5, 6), trials=2)
    serial = sweep(cfg)
    monkeypatch.setenv("BERSDEC_THREADS", "2")
    assert sweep(cfg) == serial
    assert [r["seed"] for r in serial[:-1]] == [3 ^ t for t in range(4)]


def test_random_surface_matches_trial_seed():
    a = random_surface(7, rng_for(9, 4))
    b = random_surface(7, rng_for(9 ^ 4))
    assert a == b


def test_hairy_csv(capsys):
    code, out, _ = run(capsys, "hairy", "--p", "2", "--ell", "0")
    row = next(csv.DictReader(io.StringIO(out)))
    assert code == 0 and float(row["lower_bound"]) == pytest.approx(14.1019774, abs=1e-7)
    assert list(row) == ["p", "ell", "x0", "boundary_count", "lower_bound"]


def test_bounds_table(capsys):
    code, out, _ = run(capsys, "bounds")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["bound_id", "params", "value", "direction", "citation"]
    assert any(r[0] == "sphere_sqrt" and r[4] for r in rows[1:])


def test_lift_seed3(capsys):
    code, out, _ = run(capsys, "lift", "--g", "2", "--seed", "3")
    assert code == 0 and json.loads(out)["final_count"] == 3


def test_project_command(capsys, tmp_path):
    import numpy as np
    from bersdec.normal_position import random_instance
    inst, P = random_instance(np.random.default_rng(5))
    doc = inst.to_json()
    doc["P_length"] = P
    f = tmp_path / "inst.json"
    f.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "project", str(f))
    res = json.loads(out)
    assert code == 0 and res["count"] == res["n_punctures"] - 3
    assert res["max_constructed_length"] <= P + inst.gamma_length


def test_check_command(capsys):
    code, out, _ = run(capsys, "check")
    assert code == 0 and "FAIL" not in out and "separation_n8,pass" in out


def test_console_script_installed():
    proc = subprocess.run([sys.executable, "-m", "bersdec.cli", "hairy", "--p", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "7.05098869" in proc.stdout
