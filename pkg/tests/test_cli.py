import json
import subprocess
import sys
from pathlib import Path

import pytest

from rankclust.cli import main
from rankclust.core import read_rankings_csv

FIXTURE = Path(__file__).parent / "data" / "ratings50.csv"


def test_generate_tightness(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert main(["generate", "tightness", "--k", "2", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[1] == "2,1,3,4,5,6,7"
    meta = json.loads((tmp_path / "t.csv.json").read_text())
    assert meta["expected_v_krc"] == 4 and meta["m"] == 7 and "prng" in meta


def test_generate_swap_sidecar(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["generate", "swap", "--n", "300", "--m", "6", "--k", "3", "--omega", "1", "--seed", "4", "--out", str(out)]) == 0
    meta = json.loads((tmp_path / "s.csv.json").read_text())
    assert meta["spec"] == {"n": 300, "m": 6, "k": 3, "omega": 1, "seed": 4}
    assert len(meta["true_labels"]) == 300 and len(meta["true_centroids"]) == 3
    assert read_rankings_csv(out).n == 300


def test_generate_uniform_stdout(capsys):
    assert main(["generate", "uniform", "--n", "3", "--m", "4", "--seed", "1"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_krca_json(tmp_path, capsys):
    src = tmp_path / "s.csv"
    main(["generate", "swap", "--n", "200", "--m", "5", "--k", "2", "--out", str(src)])
    assert main(["krca", "--input", str(src), "--k", "2", "--epsilon", "0", "--labels"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["final"]["objective"] <= doc["baseline"]["objective"]
    assert "labels" in doc["final"] and doc["assign_stats"][0]["method"] == "bnb"


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,1,2\n")
    assert main(["krca", "--input", str(bad), "--k", "1"]) == 2
    dup = tmp_path / "dup.csv"
    dup.write_text("1,2\n1,2\n")
    assert main(["krca", "--input", str(dup), "--k", "2"]) == 3
    assert main(["generate", "swap", "--m", "3", "--k", "6", "--n", "5"]) == 3
    assert main(["krca", "--input", str(tmp_path / "missing.csv"), "--k", "1"]) == 2
    assert main(["oracle", "objectives"]) == 2
    hdr = tmp_path / "r.csv"
    hdr.write_text("user,item,genre,rating\n")
    assert main(["ingest", "--ratings", str(hdr), "--lambda", "1"]) == 2


def test_ingest(tmp_path, capsys):
    users = tmp_path / "users.txt"
    assert main(["ingest", "--ratings", str(FIXTURE), "--lambda", "2", "--genres", "4", "--users-out", str(users)]) == 0
    assert capsys.readouterr().out == "3,4,2,1\n1,4,2,3\n"
    assert users.read_text() == "u01\nu02\n"


def test_experiment_accuracy(capsys):
    args = ["experiment", "accuracy", "--ratings", str(FIXTURE), "--lambda", "1", "--k", "1", "--seed", "0"]
    assert main(args) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["accuracy_pct"] == 100.0 and doc["retained_users"] == 1
    assert doc["train_records"] + doc["test_records"] == 50
    assert main(["experiment", "accuracy", "--ratings", str(FIXTURE), "--lambda", "5", "--k", "2"]) == 3


def test_oracle_csv(tmp_path, capsys):
    src = tmp_path / "t.csv"
    main(["generate", "tightness", "--k", "2", "--out", str(src)])
    capsys.readouterr()
    assert main(["oracle", "objectives", "--input", str(src), "--k", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,v_krc,v_kmc,ratio" and lines[2] == "2,4,2.0,2.0"
    assert main(["oracle", "mu", "--m-min", "6", "--m-max", "6", "--deltas", "1,4"]) == 0
    assert capsys.readouterr().out.splitlines() == ["m,delta=1,delta=4", "6,2,6"]


def test_bench_csv(capsys):
    assert main(["bench", "--n", "2000", "--k", "3", "--ms", "4", "--repeat", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("backend,m,n,k") and len(lines) == 2


def test_backend_flag(capsys, monkeypatch):
    from rankclust import _backend

    monkeypatch.setattr(_backend, "DEFAULT", _backend.DEFAULT)
    assert main(["--backend", "python", "generate", "uniform", "--n", "2", "--m", "3"]) == 0


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "rankclust.cli", "oracle", "mu", "--m-min", "3", "--m-max", "3"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.splitlines()[1] == "3,3,3,3"
