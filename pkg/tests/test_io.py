import io

import numpy as np
import pytest

from sasgraphon.graphio import (
    EdgeListParseError,
    PackedAdjacency,
    export_edge_list,
    export_grid,
    grid_to_pixels,
    parse_edge_list,
    shuffle_nodes,
    summary_csv,
    summary_json,
    to_adjacency,
    write_upsampled_pgm,
)
from sasgraphon.bench import SummaryRow
from sasgraphon.graphons import catalog_graphon, sample_graph
from sasgraphon.pipeline import (
    apply_permutation,
    block_histogram,
    empirical_degrees,
    kron_upsample,
    sas_estimate,
    sort_permutation,
)

from helpers import distinct_outdegree_graph


def test_parse_basic():
    edges = parse_edge_list("# comment\n0 1\n1 2\n")
    assert edges.n == 3
    assert {tuple(e) for e in edges.edges} == {(0, 1), (1, 2)}


def test_parse_drops_self_loops_but_counts_ids():
    edges = parse_edge_list("0 0\n0 1\n")
    assert edges.n == 2
    assert {tuple(e) for e in edges.edges} == {(0, 1)}


def test_parse_deduplicates():
    edges = parse_edge_list("0 1\n0 1\n1 0\n")
    assert {tuple(e) for e in edges.edges} == {(0, 1), (1, 0)}


def test_parse_compacts_by_first_appearance():
    edges = parse_edge_list("5 7\n7 3\n")
    assert edges.n == 3
    assert {tuple(e) for e in edges.edges} == {(0, 1), (1, 2)}


def test_parse_accepts_file_objects():
    edges = parse_edge_list(io.StringIO("0 1\n"))
    assert edges.n == 2


def test_parse_reports_line_numbers():
    with pytest.raises(EdgeListParseError, match="line 2"):
        parse_edge_list("0 1\n0 x\n")
    with pytest.raises(EdgeListParseError, match="line 3"):
        parse_edge_list("0 1\n\n1 2 3\n")
    with pytest.raises(EdgeListParseError, match="line 1"):
        parse_edge_list("-1 2\n")


def test_parse_rejects_empty_edge_set():
    with pytest.raises(ValueError):
        parse_edge_list("# nothing\n")
    with pytest.raises(ValueError):
        parse_edge_list("3 3\n")


def test_to_adjacency_symmetrize_flag():
    edges = parse_edge_list("0 1\n")
    np.testing.assert_array_equal(to_adjacency(edges, symmetrize=True), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(to_adjacency(edges, symmetrize=False), [[0, 1], [0, 0]])


def test_to_adjacency_enforces_memory_cap():
    edges = parse_edge_list("0 1\n1 2\n2 3\n")
    with pytest.raises(ValueError, match="memory cap"):
        to_adjacency(edges, symmetrize=True, mem_cap_bytes=8)


def test_edge_list_round_trip():
    adj, _ = sample_graph(catalog_graphon(4), 50, seed=13)
    adj[:, 7] = 0
    adj[7, :] = 0  # isolated node must survive the round trip
    back = to_adjacency(parse_edge_list(export_edge_list(adj)), symmetrize=False)
    np.testing.assert_array_equal(back, adj)


def test_edge_list_round_trip_directed():
    adj = distinct_outdegree_graph(20)
    back = to_adjacency(parse_edge_list(export_edge_list(adj)), symmetrize=False)
    np.testing.assert_array_equal(back, adj)


def test_shuffle_single_node():
    adj = np.zeros((1, 1), dtype=np.uint8)
    np.testing.assert_array_equal(shuffle_nodes(adj, seed=0), adj)


def test_shuffle_preserves_degree_multiset():
    adj, _ = sample_graph(catalog_graphon(2), 40, seed=3)
    shuffled = shuffle_nodes(adj, seed=99)
    assert sorted(empirical_degrees(adj)) == sorted(empirical_degrees(shuffled))
    assert adj.sum() == shuffled.sum()


def test_shuffle_deterministic():
    adj, _ = sample_graph(catalog_graphon(2), 30, seed=3)
    np.testing.assert_array_equal(shuffle_nodes(adj, seed=5), shuffle_nodes(adj, seed=5))


def test_estimate_invariant_under_shuffle():
    adj = distinct_outdegree_graph(30)
    base = sas_estimate(adj).w_est
    np.testing.assert_array_equal(sas_estimate(shuffle_nodes(adj, seed=17)).w_est, base)


def test_pgm_single_pixel_rounds_half_up():
    data = export_grid(np.array([[0.5]]), "pgm")
    assert data == b"P5\n1 1\n255\n" + bytes([128])


def test_pgm_round_half_up_not_bankers():
    # 24.5/255 scales to exactly 24.5; half-up gives 25, banker's would give 24
    data = export_grid(np.array([[24.5 / 255.0]]), "pgm")
    assert data[-1] == 25


def test_pgm_checkerboard_bytes():
    data = export_grid(np.array([[0.0, 1.0], [1.0, 0.0]]), "pgm")
    assert data == b"P5\n2 2\n255\n" + bytes([0, 255, 255, 0])


def test_pgm_rejects_out_of_range():
    with pytest.raises(ValueError):
        export_grid(np.array([[1.5]]), "pgm")


def test_csv_round_trip():
    grid = np.random.default_rng(4).random((5, 5))
    text = export_grid(grid, "csv").decode("ascii")
    back = np.loadtxt(io.StringIO(text), delimiter=",")
    np.testing.assert_allclose(back, grid, atol=1e-12)


def test_export_grid_unknown_format():
    with pytest.raises(ValueError):
        export_grid(np.zeros((2, 2)), "png")


def test_write_upsampled_pgm_matches_naive_export(tmp_path):
    grid = np.random.default_rng(5).random((4, 4))
    path = tmp_path / "up.pgm"
    write_upsampled_pgm(str(path), grid, h=3, n=13)
    naive = export_grid(kron_upsample(grid, 3, 13), "pgm")
    assert path.read_bytes() == naive


def test_packed_matches_dense_adjacency():
    edges = parse_edge_list("0 3\n1 2\n4 0\n2 2\n")
    for symmetrize in (False, True):
        dense = to_adjacency(edges, symmetrize)
        packed = PackedAdjacency.from_edges(edges, symmetrize)
        unpacked = np.unpackbits(packed.rows, axis=1, count=edges.n)
        np.testing.assert_array_equal(unpacked, dense)
        np.testing.assert_array_equal(packed.degrees(), empirical_degrees(dense))


def test_packed_histogram_matches_dense_pipeline():
    adj, _ = sample_graph(catalog_graphon(7), 123, seed=11)
    text = export_edge_list(adj)
    edges = parse_edge_list(text)
    packed = PackedAdjacency.from_edges(edges, symmetrize=False)
    perm = sort_permutation(packed.degrees())
    for comp in (False, True):
        direct = block_histogram(apply_permutation(adj, perm), 7, compensate_diagonal=comp)
        via_packed = packed.sorted_block_histogram(perm, 7, compensate_diagonal=comp)
        np.testing.assert_allclose(via_packed, direct, atol=1e-12)


def _rows():
    return [SummaryRow(graphon_id=1, n=200, estimator="sas", trials=2,
                       mean_mse=1.5e-4, std_mse=2e-5, mean_wall_ms=12.5)]


def test_summary_csv_schema():
    text = summary_csv(_rows())
    lines = text.strip().split("\n")
    assert lines[0] == "graphon_id,n,estimator,trials,mean_mse,std_mse,mean_wall_ms"
    fields = lines[1].split(",")
    assert fields[:4] == ["1", "200", "sas", "2"]
    assert float(fields[4]) == pytest.approx(1.5e-4)


def test_summary_json_schema():
    import json

    rows = json.loads(summary_json(_rows()))
    assert rows[0] == {
        "graphon_id": 1, "n": 200, "estimator": "sas", "trials": 2,
        "mean_mse": 1.5e-4, "std_mse": 2e-5, "mean_wall_ms": 12.5,
    }
