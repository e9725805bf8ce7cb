import json

import pytest

from prodnet import (
    DuplicateEdgeWarning,
    FormatError,
    ProductionNetwork,
    ValidationError,
    generate_parallel,
    load_network_json,
    parse_edge_csv,
    parse_io_table,
    save_edge_csv,
    save_network_json,
)
from prodnet.fileio import write_csv


def test_edge_csv_basic(tmp_path):
    f = tmp_path / "net.csv"
    f.write_text("source,target\n1,2\n", encoding="utf-8")
    net = parse_edge_csv(f)
    assert net.node_count == 2
    assert net.edges == ((1, 2),)


def test_edge_csv_first_appearance_ids(tmp_path):
    f = tmp_path / "net.csv"
    f.write_text("source,target\nwheel,car\nengine,car\nsteel,wheel\n", encoding="utf-8")
    net = parse_edge_csv(f)
    # wheel=1, car=2, engine=3, steel=4
    assert net.node_count == 4
    assert set(net.edges) == {(1, 2), (3, 2), (4, 1)}


def test_edge_csv_duplicate_warns(tmp_path):
    f = tmp_path / "net.csv"
    f.write_text("source,target\na,b\na,b\n", encoding="utf-8")
    with pytest.warns(DuplicateEdgeWarning, match="1 duplicate"):
        net = parse_edge_csv(f)
    assert net.edge_count == 1


def test_edge_csv_self_loop_rejected(tmp_path):
    f = tmp_path / "net.csv"
    f.write_text("source,target\na,a\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        parse_edge_csv(f)


def test_edge_csv_header_required(tmp_path):
    f = tmp_path / "net.csv"
    f.write_text("from,to\n1,2\n", encoding="utf-8")
    with pytest.raises(FormatError):
        parse_edge_csv(f)


def test_edge_csv_malformed_row_has_line_number(tmp_path):
    f = tmp_path / "net.csv"
    f.write_text("source,target\n1,2\n3\n", encoding="utf-8")
    with pytest.raises(FormatError, match=":3"):
        parse_edge_csv(f)


def test_edge_csv_large_node_count(tmp_path):
    # a 626-node assembly chain, the scale of the largest catalog network
    f = tmp_path / "big.csv"
    rows = ["source,target"] + [f"p{i},p{i + 1}" for i in range(1, 626)]
    f.write_text("\n".join(rows) + "\n", encoding="utf-8")
    net = parse_edge_csv(f)
    assert net.node_count == 626
    assert net.edge_count == 625


def test_io_table_single_edge(tmp_path):
    f = tmp_path / "io.csv"
    f.write_text(",A,B\nA,0,5\nB,0,0\n", encoding="utf-8")
    net = parse_io_table(f)
    assert net.node_count == 2
    assert net.edges == ((1, 2),)
    assert net.acyclic


def test_io_table_dense_cyclic(tmp_path):
    f = tmp_path / "io.csv"
    f.write_text(",A,B,C\nA,1,2,3\nB,4,5,6\nC,7,8,9\n", encoding="utf-8")
    net = parse_io_table(f)
    assert net.edge_count == 6  # diagonal ignored
    assert not net.acyclic


def test_io_table_threshold(tmp_path):
    f = tmp_path / "io.csv"
    f.write_text(",A,B\nA,0,0.4\nB,0.6,0\n", encoding="utf-8")
    net = parse_io_table(f, threshold=0.5)
    assert net.edges == ((2, 1),)


def test_io_table_non_square(tmp_path):
    f = tmp_path / "io.csv"
    f.write_text(",A,B\nA,0,1\n", encoding="utf-8")
    with pytest.raises(FormatError):
        parse_io_table(f)


def test_json_round_trip(tmp_path):
    net = generate_parallel(5, 2, 3, seed=3)
    path = tmp_path / "net.json"
    save_network_json(net, path)
    loaded = load_network_json(path)
    assert loaded == net
    assert loaded.tiers == net.tiers
    assert loaded.acyclic == net.acyclic


def test_json_schema_checked(tmp_path):
    path = tmp_path / "net.json"
    path.write_text(json.dumps({"k": 2, "n": 1, "edges": []}), encoding="utf-8")
    with pytest.raises(FormatError):
        load_network_json(path)


def test_edge_csv_round_trip_normalizes(tmp_path):
    # ids survive when they already follow first-appearance order
    net = ProductionNetwork(3, [(1, 2), (2, 3)])
    path = tmp_path / "net.csv"
    save_edge_csv(net, path)
    assert parse_edge_csv(path) == net
    # otherwise the reparse renumbers but preserves the structure
    scrambled = ProductionNetwork(4, [(1, 2), (1, 4), (2, 3)])
    save_edge_csv(scrambled, path)
    again = parse_edge_csv(path)
    assert again.node_count == 4 and again.edge_count == 3
    assert set(again.edges) == {(1, 2), (1, 3), (2, 4)}  # first-appearance ids
    assert sorted(again.out_degree(v) for v in range(1, 5)) == sorted(
        scrambled.out_degree(v) for v in range(1, 5)
    )


def test_write_csv_deterministic_bytes(tmp_path):
    rows = [(1, 0.1 + 0.2, "x"), (2, 1e-17, "y")]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(a, ["i", "v", "s"], rows)
    write_csv(b, ["i", "v", "s"], rows)
    assert a.read_bytes() == b.read_bytes()
    assert b"0.30000000000000004" in a.read_bytes()  # repr round-trip form
