import json
import subprocess
import sys

import pytest

from vlmc import SamplePath, model_to_dict
from vlmc.cli import main

from .conftest import make_T0, make_T1


@pytest.fixture
def t1_file(tmp_path):
    p = tmp_path / "t1.json"
    p.write_text(json.dumps(model_to_dict(make_T1())))
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_sample_then_estimate(tmp_path, t1_file, capsys):
    sp = str(tmp_path / "x.txt")
    code, _, _ = run(["sample", "--model", t1_file, "--n", "131072", "--seed", "5", "--out", sp], capsys)
    assert code == 0
    path = SamplePath.read(sp)
    assert len(path) == 131072
    assert path.provenance["seed"] == 5 and path.provenance["prng"] == "numpy.PCG64"
    code, out, _ = run(["estimate", "--sample", sp, "--delta", "0.025", "--depth", "4",
                        "--K", "3", "--truth", t1_file], capsys)
    assert code == 0
    res = json.loads(out)
    assert set(res) == {"contexts", "match_at_K"}
    assert isinstance(res["match_at_K"], bool)
    for c in res["contexts"]:
        assert sum(c["p"]) == pytest.approx(1.0)


def test_sample_is_reproducible(tmp_path, t1_file, capsys):
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    for out in (a, b):
        assert run(["sample", "--model", t1_file, "--n", "500", "--seed", "9", "--out", out], capsys)[0] == 0
    assert open(a).read() == open(b).read()


def test_dump_counts(tmp_path, capsys):
    sp = tmp_path / "s.txt"
    sp.write_text("0110100\n")
    code, out, _ = run(["estimate", "--sample", str(sp), "--delta", "0.1", "--depth", "1",
                        "--dump-counts"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[:6] == ["0,4", "1,3", "00,1", "01,2", "10,2", "11,1"]
    assert json.loads(lines[-1])["match_at_K"] is None


def test_analyze_fields(t1_file, capsys):
    code, out, _ = run(["analyze", "--model", t1_file, "--kmax", "5", "--K", "3",
                        "--n", "1000000", "--delta", "0.025"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert set(rep) == {"alpha_seq", "alpha_sum", "C", "D", "epsilon", "rho_seq",
                        "rho_sum", "d_min", "bounds"}
    assert len(rep["D"]) == len(rep["epsilon"]) == 5
    assert rep["d_min"]["3"] == 4
    assert rep["D"][0] == pytest.approx(55 / 1833)
    assert rep["bounds"]["recovery"] > 0


def test_experiment_command(tmp_path, capsys):
    cfg = {"model": model_to_dict(make_T0()), "n_grid": [1000, 5000], "delta": 0.1, "d": 2,
           "K": 1, "R": 10, "master_seed": 1}
    cp = tmp_path / "cfg.json"
    cp.write_text(json.dumps(cfg))
    out = tmp_path / "curve.csv"
    assert run(["experiment", "--config", str(cp), "--out", str(out)], capsys)[0] == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,failures,R,error_freq,stderr,bound,vacuous,config_hash"
    assert len(lines) == 3


def test_exit_codes(tmp_path, t1_file, capsys):
    sp = tmp_path / "s.txt"
    sp.write_text("0110\n")
    # precondition: depth >= n
    assert run(["estimate", "--sample", str(sp), "--delta", "0.1", "--depth", "4"], capsys)[0] == 2
    # invalid input: symbol outside the alphabet of the truth model
    sp.write_text("0120\n")
    assert run(["estimate", "--sample", str(sp), "--delta", "0.1", "--depth", "1",
                "--truth", t1_file], capsys)[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"alphabet": ["0", "1"], "kind": "finite",
                               "contexts": [{"w": "0", "p": [0.5, 0.6]}, {"w": "1", "p": [0.5, 0.5]}]}))
    assert run(["analyze", "--model", str(bad)], capsys)[0] == 3
    assert run(["analyze", "--model", str(tmp_path / "missing.json")], capsys)[0] == 3
    assert run(["analyze", "--model", t1_file, "--n", "100", "--delta", "0.025"], capsys)[0] == 0
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": model_to_dict(make_T0()), "n_grid": [100, 200],
                               "delta": 0.1, "d": 2, "R": 2}))
    assert run(["experiment", "--config", str(cfg)], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["sample", "--n", "notanumber"])
    assert exc.value.code == 3


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "vlmc.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "analyze" in r.stdout
