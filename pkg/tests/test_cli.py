import json
from fractions import Fraction

import pytest

from graphsurface.cli import CSV_COLUMNS, main
from graphsurface.config import ConfigError, ExperimentConfig


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_config_round_trip(tmp_path):
    cfg = ExperimentConfig(
        motifs=["triangle", "square"],
        p=Fraction(1, 4),
        n_grid=[8, 12],
        replicas=50,
        master_seed=9,
        block=None,
    )
    path = tmp_path / "c.json"
    path.write_text(cfg.dumps())
    assert ExperimentConfig.load(path) == cfg


@pytest.mark.parametrize(
    "data",
    [
        {"motifs": ["triangle"], "bogus": 1},
        {"motifs": []},
        {"motifs": ["nope"]},
        {"motifs": ["triangle"], "p": "3/2"},
        {"motifs": ["triangle"], "schema_version": 2},
        {"motifs": ["triangle"], "ensemble": "block_dependent"},
        {"motifs": ["triangle"], "E": 3, "n_grid": [4, 5]},
        {"motifs": ["triangle"], "replicas": 0},
    ],
)
def test_bad_configs_rejected(data):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(data)


def test_exact_command(tmp_path, capsys):
    code, out = run(capsys, "exact", "--n", "4", "--E", "3", "--ensemble", "dependent", "--out", str(tmp_path))
    assert code == 0
    payload = json.loads(out.out)
    assert payload[0]["mean"]["exact"] == "1/5"
    assert payload[0]["variance"]["exact"] == "4/25"
    assert json.loads((tmp_path / "exact.json").read_text()) == payload


def test_census_command(tmp_path, capsys):
    code, out = run(capsys, "census", "--motif", "triangle", "--n", "4", "--out", str(tmp_path))
    entry = json.loads(out.out)[0]
    assert code == 0 and entry["counts"] == [0, 12, 0, 4] and entry["sumk_ok"]
    assert entry["polynomials"][3]["coeffs"] == ["0/1", "1/3", "-1/2", "1/6"]


def test_asymptotic_command(tmp_path, capsys):
    code, out = run(capsys, "asymptotic", "--motif", "square", "--out", str(tmp_path))
    rows = json.loads(out.out)
    assert code == 0 and len(rows) == 4
    dep_n = next(r for r in rows if r["ensemble"] == "dependent" and r["size_parameter"] == "n")
    assert dep_n["variance_growth_exponent"] == "5/1" and dep_n["surface_significant"]


def test_exit_code_config_error(tmp_path, capsys):
    code, out = run(capsys, "exact", "--p", "2", "--out", str(tmp_path))
    assert code == 2 and "error" in out.err
    code, _ = run(capsys, "simulate", "--config", str(tmp_path / "missing.json"))
    assert code == 2


def test_exit_code_feasibility(tmp_path, capsys):
    code, out = run(capsys, "census", "--motif", "square", "--n", "80", "--method", "pairs", "--out", str(tmp_path))
    assert code == 3


def test_simulate_is_deterministic_across_threads(tmp_path, capsys):
    args = ["simulate", "--motif", "triangle", "--motif", "two_star", "--n", "9", "--n", "11",
            "--replicas", "120", "--seed", "5"]
    run(capsys, *args, "--out", str(tmp_path / "a"), "--threads", "1")
    run(capsys, *args, "--out", str(tmp_path / "b"), "--threads", "2")
    a = (tmp_path / "a" / "simulate.csv").read_bytes()
    assert a == (tmp_path / "b" / "simulate.csv").read_bytes()
    lines = a.decode().splitlines()
    assert lines[0].split(",") == CSV_COLUMNS
    assert len(lines) == 1 + 2 * 2 * 2


def test_simulate_block_outputs(tmp_path, capsys):
    cfg = {
        "motifs": ["triangle"],
        "ensemble": "block_dependent",
        "n_grid": [4],
        "replicas": 30,
        "dump_samples": 3,
        "block": {"weights": [1, 1], "p": [["1/2", "1/4"], ["1/4", "1/2"]]},
        "output_dir": str(tmp_path),
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    code, _ = run(capsys, "simulate", "--config", str(path))
    assert code == 0
    assert len((tmp_path / "samples.txt").read_text().splitlines()) == 3
    assert all(r["additive"] for r in json.loads((tmp_path / "block_additivity.json").read_text()))
    row = (tmp_path / "simulate.csv").read_text().splitlines()[1].split(",")
    assert row[1] == "block_dependent" and row[4] == str(3 + 4 + 3)


def test_compare_check(tmp_path, capsys):
    code, out = run(capsys, "compare", "--motif", "two_star", "--n", "6", "--n", "8", "--replicas", "400",
                    "--out", str(tmp_path), "--check")
    summary = json.loads(out.out)
    assert {f["ensemble"] for f in summary["fits"]} == {"dependent", "independent"}
    assert code == 0
    header = (tmp_path / "compare.csv").read_text().splitlines()[0]
    assert header.endswith("exact_resvar,resvar_ratio")
