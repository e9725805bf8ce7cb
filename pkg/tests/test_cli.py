import json

import pytest

from prodnet.cli import main
from prodnet import load_network_json


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_writes_network(tmp_path, capsys):
    out = tmp_path / "net.json"
    code, stdout, _ = run_cli(
        capsys, "generate", "--arch", "rdag", "--K", "10", "--p", "0.3", "--seed", "4",
        "--out", str(out),
    )
    assert code == 0
    net = load_network_json(out)
    assert net.node_count == 10
    doc = json.loads(stdout)
    assert doc["command"] == "generate"
    assert doc["version"]
    assert doc["spec"]["K"] == 10


def test_generate_chain_via_backward_tree(tmp_path, capsys):
    out = tmp_path / "chain.json"
    code, _, _ = run_cli(
        capsys, "generate", "--arch", "backward-tree", "--m", "1", "--D", "8", "--out", str(out)
    )
    assert code == 0
    assert load_network_json(out).node_count == 8


def test_simulate_histogram(tmp_path, capsys):
    net_path = tmp_path / "net.json"
    run_cli(capsys, "generate", "--arch", "backward-tree", "--m", "1", "--D", "5",
            "--out", str(net_path))
    hist = tmp_path / "hist.csv"
    code, stdout, _ = run_cli(
        capsys, "simulate", "--net", str(net_path), "--x", "0.3", "--trials", "200",
        "--seed", "1", "--out", str(hist),
    )
    assert code == 0
    lines = hist.read_text().strip().splitlines()
    assert lines[0] == "f,count,frequency"
    assert len(lines) == 7  # header + f = 0..5
    assert json.loads(stdout)["mean_failures"] >= 0


def test_resilience_deterministic_bytes(tmp_path, capsys):
    net_path = tmp_path / "net.json"
    run_cli(capsys, "generate", "--arch", "backward-tree", "--m", "1", "--D", "8",
            "--out", str(net_path))
    out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
    for out in (out1, out2):
        code, stdout, _ = run_cli(
            capsys, "resilience", "--net", str(net_path), "--trials", "300",
            "--eps-grid", "0.2,0.5,0.8", "--seed", "3", "--out", str(out),
        )
        assert code == 0
        assert "auc" in json.loads(stdout)
    assert out1.read_bytes() == out2.read_bytes()
    assert out1.read_text().splitlines()[0] == "epsilon,r_hat,stderr"


def test_bounds_subcommands(tmp_path, capsys):
    cases = [
        ["--arch", "rdag", "--K", "100", "--p", "0.1", "--epsilon", "0.3"],
        ["--arch", "parallel", "--K", "50", "--m", "2", "--d", "3", "--epsilon", "0.3"],
        ["--arch", "backward-tree", "--m", "2", "--D", "4", "--epsilon", "0.3"],
        ["--arch", "gw", "--mu", "0.6", "--tau", "4", "--epsilon", "0.3"],
        ["--arch", "trellis", "--w", "3", "--D", "4", "--p", "0.2", "--epsilon", "0.3"],
    ]
    for args in cases:
        out = tmp_path / "b.csv"
        code, _, _ = run_cli(capsys, "bounds", *args, "--out", str(out))
        assert code == 0
        assert out.read_text().splitlines()[0] == "architecture,regime,lower,upper"


def test_beta_ranking_csv(tmp_path, capsys):
    net_path = tmp_path / "net.json"
    run_cli(capsys, "generate", "--arch", "backward-tree", "--m", "1", "--D", "4",
            "--out", str(net_path))
    out = tmp_path / "beta.csv"
    code, _, _ = run_cli(
        capsys, "beta", "--net", str(net_path), "--x", "0.2", "--y", "0.5", "--out", str(out)
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "product,beta,rank"
    assert len(lines) == 5
    # supply flows 4 -> 3 -> 2 -> 1 in the backward tree: the root piles up risk
    assert lines[1].startswith("1,")


def test_intervene_monotone_lower_bound(tmp_path, capsys):
    net_path = tmp_path / "net.csv"
    net_path.write_text("source,target\n1,2\n2,3\n1,3\n", encoding="utf-8")
    out = tmp_path / "curve.csv"
    code, _, _ = run_cli(capsys, "intervene", "--net", str(net_path), "--out", str(out))
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "T,T_frac,objective,resilience_lb"
    assert len(lines) == 5  # header + T = 0..3
    lbs = [float(line.split(",")[3]) for line in lines[1:]]
    objs = [float(line.split(",")[2]) for line in lines[1:]]
    assert all(a <= b + 1e-12 for a, b in zip(lbs, lbs[1:]))
    assert all(a >= b - 1e-12 for a, b in zip(objs, objs[1:]))


def test_io_table_ingestion(tmp_path, capsys):
    table = tmp_path / "econ.csv"
    table.write_text(",A,B,C\nA,0,3,1\nB,0,0,2\nC,5,0,0\n", encoding="utf-8")
    out = tmp_path / "hist.csv"
    code, stdout, _ = run_cli(
        capsys, "simulate", "--net", str(table), "--net-format", "io-table",
        "--x", "0.2", "--trials", "100", "--seed", "0", "--out", str(out),
    )
    assert code == 0
    assert json.loads(stdout)["k"] == 3


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 1


def test_validation_exit_code(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    code, _, stderr = run_cli(
        capsys, "simulate", "--net", str(missing), "--x", "0.2", "--out", str(tmp_path / "h.csv")
    )
    assert code == 2


def test_precondition_exit_code(tmp_path, capsys):
    net_path = tmp_path / "net.csv"
    net_path.write_text("source,target\n1,2\n1,3\n", encoding="utf-8")  # Delta = 2
    code, _, stderr = run_cli(
        capsys, "beta", "--net", str(net_path), "--x", "0.2", "--y", "0.9",
        "--method", "katz", "--out", str(tmp_path / "b.csv"),
    )
    assert code == 3
    assert "precondition" in stderr


def test_gw_unsupported_regime_exit_code(tmp_path, capsys):
    code, _, stderr = run_cli(
        capsys, "bounds", "--arch", "gw", "--mu", "2.0", "--tau", "3",
        "--epsilon", "0.3", "--out", str(tmp_path / "b.csv"),
    )
    assert code == 3


def test_missing_arch_params_exit_code(tmp_path, capsys):
    code, _, stderr = run_cli(
        capsys, "bounds", "--arch", "rdag", "--epsilon", "0.3", "--out", str(tmp_path / "b.csv")
    )
    assert code == 2
    assert "--K" in stderr or "-K" in stderr
