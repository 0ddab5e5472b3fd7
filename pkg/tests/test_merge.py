import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaoa2.graph import Graph, cut_value, induced_subgraphs, total_weight
from qaoa2.merge import build_coarse, coarse_objective, expand, solve_merge
from qaoa2.partition import Partition

from .conftest import random_graph, random_spins


def ring_problem(ring4, labels, locals_):
    return build_coarse(ring4, Partition.from_labels(labels), [np.array(x) for x in locals_])


def all_spins(h):
    return [np.array(s, dtype=np.int8) for s in itertools.product((1, -1), repeat=h)]


def test_ring_interleaved_blocks(ring4):
    # nodes {1,3} and {2,4}, both local solutions (+1,-1)
    cp = ring_problem(ring4, [0, 1, 0, 1], [(1, -1), (1, -1)])
    assert cp.coarse_graph.n_edges == 0
    assert cp.offset == 2
    for s in all_spins(2):
        assert cut_value(ring4, expand(cp, s)) == 2
    s, value = solve_merge(cp, lambda cg: np.array([1, -1]))
    assert value == 2


def test_ring_adjacent_blocks(ring4):
    cp = ring_problem(ring4, [0, 0, 1, 1], [(1, -1), (1, -1)])
    assert cp.coarse_weights[0, 1] == -2
    assert cp.offset == 3
    z = expand(cp, [1, -1])
    np.testing.assert_array_equal(z, [1, -1, -1, 1])
    assert coarse_objective(cp, [1, -1]) == 2 == cut_value(ring4, z)
    assert coarse_objective(cp, [1, 1]) == 4
    # a bad coarse answer is repaired by the polish
    s, value = solve_merge(cp, lambda cg: np.array([1, -1], dtype=np.int8))
    assert value == 4


def test_sync_async_split_crossing_weight():
    rng = np.random.default_rng(0)
    g = random_graph(rng, 10, weights=(1, 6))
    p = Partition.from_labels(rng.integers(0, 3, 10))
    locals_ = [random_spins(rng, sub.n_nodes) for sub, _ in induced_subgraphs(g, p)]
    cp = build_coarse(g, p, locals_)
    crossing = g.w[p.block_of[g.u] != p.block_of[g.v]].sum()
    assert np.triu(cp.sync_weights + cp.async_weights, 1).sum() == crossing
    np.testing.assert_array_equal(cp.sync_weights, cp.sync_weights.T)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(6, 12), st.integers(2, 4))
def test_coarse_objective_is_exact(seed, n, h):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n, p=rng.uniform(0.2, 0.9), weights=(0, 6))
    labels = np.concatenate([np.arange(h), rng.integers(0, h, n - h)])
    p = Partition.from_labels(rng.permutation(labels))
    locals_ = [random_spins(rng, sub.n_nodes) for sub, _ in induced_subgraphs(g, p)]
    cp = build_coarse(g, p, locals_)
    values = []
    for s in all_spins(p.n_blocks):
        z = expand(cp, s)
        assert coarse_objective(cp, s) == cut_value(g, z)
        values.append(cut_value(g, z))
    # maximising over s is the same as maximising over the Z2-orbit family Z
    family = {tuple(np.concatenate([s[b] * cp.local_solutions[b] for b in range(p.n_blocks)]))
              for s in all_spins(p.n_blocks)}
    order = np.concatenate([np.flatnonzero(p.block_of == b) for b in range(p.n_blocks)])
    best_z = -np.inf
    for flat in family:
        z = np.empty(n, dtype=np.int8)
        z[order] = flat
        best_z = max(best_z, cut_value(g, z))
    assert max(values) == best_z


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(4, 16), st.integers(2, 6))
def test_solve_merge_safety(seed, n, h):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n, weights=(0, 6))
    p = Partition.from_labels(rng.integers(0, h, n))
    locals_ = [random_spins(rng, sub.n_nodes) for sub, _ in induced_subgraphs(g, p)]
    cp = build_coarse(g, p, locals_)
    s, value = solve_merge(cp, lambda cg: random_spins(rng, cg.n_nodes))
    assert value == coarse_objective(cp, s)
    assert value >= coarse_objective(cp, np.ones(p.n_blocks))
    assert value - cp.offset + 0.5 * total_weight(cp.coarse_graph) >= 0.5 * total_weight(cp.coarse_graph) - 1e-9


def test_build_coarse_validates():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    p = Partition.from_labels([0, 0, 1])
    with pytest.raises(ValueError):
        build_coarse(g, p, [np.array([1, -1])])
    with pytest.raises(ValueError):
        build_coarse(g, p, [np.array([1, 0]), np.array([1])])
    cp = build_coarse(g, p, [np.array([1, -1]), np.array([1])])
    assert cp.to_json() == {"n_blocks": 2, "offset": cp.offset, "local_cuts": [1.0, 0.0]}
