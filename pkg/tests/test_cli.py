"""CLI contract: exit codes, file outputs, reproducibility."""

import json

import pytest

from prnet.cli import main
from prnet.strategy import sample_random_network, save_network, trivial_network


@pytest.fixture
def net_file(tmp_path):
    path = tmp_path / "net.json"
    save_network(sample_random_network((1, 1, 1), 7), path)
    return str(path)


def test_validate_ok_and_missing_file(net_file, capsys):
    assert main(["validate", net_file]) == 0
    assert "valid" in capsys.readouterr().out
    assert main(["validate", "/nonexistent/net.json"]) == 2


def test_validate_malformed_tree(tmp_path, capsys):
    import prnet.strategy as strategy

    net = strategy.network_to_json(trivial_network((1, 1, 1)))
    # orphan the second box: the tree stops after one query
    net["parties"]["Alice"]["trees"]["0"]["on0"] = None
    net["parties"]["Alice"]["trees"]["0"]["on1"] = None
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(net))
    assert main(["validate", str(path)]) == 1
    assert "incomplete path" in capsys.readouterr().out


def test_behavior_trivial_tight(tmp_path, capsys):
    path = tmp_path / "trivial.json"
    save_network(trivial_network((1, 1, 1)), path)
    assert main(["behavior", str(path), "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "E(F) = 1/8" in out
    assert "bound satisfied (tight)" in out
    assert (tmp_path / "trivial.behavior.json").exists()
    assert (tmp_path / "trivial.behavior.csv").exists()
    assert (tmp_path / "manifest.json").exists()


def test_behavior_quantum_violates(capsys):
    assert main(["behavior", "--quantum"]) == 0
    out = capsys.readouterr().out
    assert "E(F) = 0.0732233" in out
    assert "bound VIOLATED" in out


def test_behavior_check_orderings(net_file, capsys):
    assert main(["behavior", net_file, "--check-orderings"]) == 0
    assert "6/6 orderings identical" in capsys.readouterr().out


def test_exact_outputs_byte_identical_across_runs(net_file, tmp_path):
    out1 = tmp_path / "r1"
    out2 = tmp_path / "r2"
    for out in (out1, out2):
        assert main(["behavior", net_file, "--out", str(out)]) == 0
    name = "net.behavior.json"
    assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    csv_name = "net.behavior.csv"
    assert (out1 / csv_name).read_bytes() == (out2 / csv_name).read_bytes()


def test_verify_passes_on_network(net_file, capsys):
    assert main(["verify", net_file, "--skip-lp"]) == 0
    out = capsys.readouterr().out
    for law in ("well-formed", "joint-laws", "ordering-invariance", "no-signaling", "bound-chain"):
        assert f"PASS {law}" in out


def test_verify_lp_only(capsys):
    assert main(["verify", "--lp-only"]) == 0
    out = capsys.readouterr().out
    assert "PASS fixed-output-lp[+]" in out
    assert "1/1 (exact)" in out


def test_transform_emits_report(net_file, capsys):
    assert main(["transform", net_file]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) >= {"a_b_star", "k_star", "values", "checks"}
    assert all(doc["checks"].values())


def test_lp_objectives(capsys):
    assert main(["lp", "--objective", "fixed-output", "--fixed", "0"]) == 0
    assert "optimum: 1/1 (exact" in capsys.readouterr().out
    assert main(["lp", "--objective", "min-ef"]) == 0
    assert "optimum: 0/1" in capsys.readouterr().out


def test_search_exhaustive_writes_artifacts(tmp_path, capsys):
    assert main(["search", "--mode", "exhaustive", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "best E(F) = 1/8" in out
    assert (tmp_path / "best_network.json").exists()
    assert (tmp_path / "best_behavior.json").exists()
    hist = (tmp_path / "histogram.csv").read_text().splitlines()
    assert hist[0] == "value,count"
    assert any(line.startswith("1/8,") for line in hist)


def test_sample_then_simulate(tmp_path, capsys):
    net = tmp_path / "s.json"
    assert main(["sample", "--counts", "1,1,1", "--seed", "3", "--out", str(net)]) == 0
    assert main(["simulate", str(net), "--rounds", "20000", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "max |empirical - exact| cell deviation" in out


def test_usage_errors(capsys):
    assert main(["behavior"]) == 2  # no file, no --quantum
    assert main(["verify"]) == 2  # no file, no --lp-only
    assert main(["bogus"]) == 2
