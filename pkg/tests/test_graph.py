import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaoa2.graph import (
    Graph,
    GraphFormatError,
    cut_value,
    generate,
    induced_subgraphs,
    inter_block_mask,
    parse_edge_list,
    total_weight,
    write_edge_list,
)
from qaoa2.partition import Partition

from .conftest import random_graph, random_spins


def test_parse_ring(ring4):
    assert ring4.n_nodes == 4
    assert sorted((u, v) for u, v, _ in ring4.edges) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert total_weight(ring4) == 4


def test_parse_single_node():
    g = parse_edge_list("1 0")
    assert g.n_nodes == 1 and g.n_edges == 0


def test_parse_weighted_triangle(wtriangle):
    assert wtriangle.n_edges == 3
    assert total_weight(wtriangle) == 6


def test_parse_comments_and_bytes():
    g = parse_edge_list(b"# header comment\n3 2\n# mid\n1 2 4\n2 3\n")
    assert g.edges == [(0, 1, 4.0), (1, 2, 1.0)]


@pytest.mark.parametrize(
    "text, lineno, fragment",
    [
        ("3 1\n1 x\n", 2, "non-numeric"),
        ("3 1\n1 4\n", 2, "out of range"),
        ("3 1\n0 2\n", 2, "out of range"),
        ("3 2\n1 2\n2 1\n", 3, "duplicate"),
        ("3 1\n2 2\n", 2, "self-loop"),
        ("3 1\n1 2\n2 3\n", 3, "more than"),
        ("3 2\n1 2\n", 0, "expected 2"),
        ("3\n", 1, "header"),
        ("3 1\n1 2 3 4\n", 2, "edge line"),
        ("", 0, "header"),
    ],
)
def test_parse_errors(text, lineno, fragment):
    with pytest.raises(GraphFormatError) as exc:
        parse_edge_list(text)
    assert exc.value.lineno == lineno
    assert fragment in str(exc.value)


def test_write_round_trip(ring4, wtriangle):
    for g in (ring4, wtriangle, parse_edge_list("5 0")):
        assert parse_edge_list(write_edge_list(g)) == g
    assert write_edge_list(parse_edge_list("5 0")) == "5 0\n"
    lines = write_edge_list(wtriangle).splitlines()
    assert lines[0] == "3 3" and len(lines) == 4


def test_write_round_trip_real_weights():
    g = Graph.from_edges(3, [(0, 1, 0.1), (1, 2, -2.5)])
    assert parse_edge_list(write_edge_list(g)) == g


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 1, float("inf"))])


def test_adjacency_is_symmetric(wtriangle):
    adj = wtriangle.adjacency
    assert sorted(adj[0]) == [(1, 1.0), (2, 2.0)]
    assert sorted(adj[2]) == [(0, 2.0), (1, 3.0)]
    np.testing.assert_array_equal(wtriangle.to_dense(), wtriangle.to_dense().T)


def test_from_adjacency_and_networkx(wtriangle):
    import networkx as nx

    assert Graph.from_adjacency(wtriangle.to_dense()) == wtriangle
    G = nx.Graph()
    G.add_weighted_edges_from([(0, 1, 1), (0, 2, 2), (1, 2, 3)])
    assert Graph.from_networkx(G) == wtriangle


def test_generate_regular():
    g = generate("regular", 20, 9, seed=7)
    assert g.n_edges == 90
    assert np.all(g.degrees() == 9)
    assert generate("regular", 20, 9, seed=7) == g


def test_generate_triangle():
    g = generate("regular", 3, 2, seed=1)
    assert sorted((u, v) for u, v, _ in g.edges) == [(0, 1), (0, 2), (1, 2)]


def test_generate_erdos_renyi_edge_count():
    # binomial mean n*d/2 = 100000, averaged over 10 seeds
    counts = [generate("erdos_renyi", 2000, 100, seed=s).n_edges for s in range(10)]
    assert abs(np.mean(counts) - 100000) < 0.05 * 100000


def test_generate_weights():
    g = generate("regular", 30, 4, weighted=True, seed=3)
    assert set(np.unique(g.w)) <= {0, 1, 2, 3, 4, 5}
    assert g.n_edges == 60
    g1 = generate("erdos_renyi", 60, 10, weighted=True, seed=3, weight_low=1)
    assert g1.w.min() >= 1


@pytest.mark.parametrize("kind, n, d", [("regular", 5, 3), ("regular", 4, 4), ("erdos_renyi", 3, 3)])
def test_generate_infeasible(kind, n, d):
    with pytest.raises(ValueError):
        generate(kind, n, d)


def test_cut_value_examples(ring4, wtriangle):
    assert cut_value(ring4, [1, 1, -1, 1]) == 2
    assert cut_value(ring4, [1, 1, 1, 1]) == 0
    assert cut_value(wtriangle, [1, 1, -1]) == 5
    with pytest.raises(ValueError):
        cut_value(ring4, [1, -1])
    with pytest.raises(ValueError):
        cut_value(ring4, [1, 0, 1, 1])


def test_induced_subgraphs_ring(ring4):
    subs = induced_subgraphs(ring4, Partition(np.array([0, 0, 1, 1]), 2, 2))
    assert [s.n_edges for s, _ in subs] == [1, 1]
    assert inter_block_mask(ring4, np.array([0, 0, 1, 1])).sum() == 2

    subs = induced_subgraphs(ring4, Partition(np.array([0, 1, 0, 1]), 2, 2))
    assert [s.n_edges for s, _ in subs] == [0, 0]
    assert inter_block_mask(ring4, np.array([0, 1, 0, 1])).sum() == 4
    np.testing.assert_array_equal(subs[0][1], [0, 2])


def test_induced_single_block(wtriangle):
    (sub, nodes), = induced_subgraphs(wtriangle, np.zeros(3, dtype=int))
    assert sub == wtriangle
    np.testing.assert_array_equal(nodes, [0, 1, 2])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 14), st.integers(1, 5))
def test_cut_and_partition_invariants(seed, n, h):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n)
    z = random_spins(rng, n)
    # Z2 symmetry and cut + uncut = total
    assert cut_value(g, z) == cut_value(g, -z)
    uncut = g.w[z[g.u] == z[g.v]].sum()
    assert cut_value(g, z) + uncut == total_weight(g)
    # weight conservation under any partition
    labels = rng.integers(0, h, size=n)
    p = Partition.from_labels(labels)
    subs = induced_subgraphs(g, p)
    inter = g.w[inter_block_mask(g, p)].sum()
    assert sum(total_weight(s) for s, _ in subs) + inter == total_weight(g)
    # block-local cuts plus crossing cut edges reconstruct the global cut
    local = sum(cut_value(s, z[nodes]) for s, nodes in subs)
    crossing = g.w[inter_block_mask(g, p) & (z[g.u] != z[g.v])].sum()
    assert local + crossing == cut_value(g, z)
