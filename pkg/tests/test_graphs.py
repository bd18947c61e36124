from __future__ import annotations

import numpy as np
import pytest

from swapfree import (
    HardwareGraph,
    density_edge_count,
    graph_from_text,
    graph_to_text,
    random_connected_graph,
)


def bfs_connected(g: HardwareGraph) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def test_complete_graph_forced_at_density_one():
    for seed in (0, 1, 99):
        g = random_connected_graph(4, 1.0, seed)
        assert g.edge_count == 6
        assert g.edges == HardwareGraph.complete(4).edges


def test_two_vertices_single_edge():
    g = random_connected_graph(2, 1.0, 5)
    assert g.edges == frozenset({(0, 1)})


def test_exact_edge_count_and_connectivity():
    g = random_connected_graph(8, 0.5, seed=7)
    assert g.edge_count == round(0.5 * 28) == 14
    assert bfs_connected(g)


@pytest.mark.parametrize("n,density,seed", [(5, 0.5, 0), (8, 0.3, 3), (10, 0.25, 9), (12, 0.9, 4)])
def test_generated_graph_invariants(n, density, seed):
    g = random_connected_graph(n, density, seed)
    a = g.adjacency()
    assert np.array_equal(a, a.T)
    assert np.all(np.diag(a) == 0)
    assert set(np.unique(a)) <= {0.0, 1.0}
    assert bfs_connected(g)
    assert g.edge_count == density_edge_count(n, density)
    # laplacian rows sum to zero
    assert np.abs(g.laplacian().sum(axis=1)).max() == 0.0


def test_complement_partitions_all_pairs():
    g = random_connected_graph(7, 0.4, 2)
    comp = g.complement()
    all_pairs = {(i, j) for i in range(7) for j in range(i + 1, 7)}
    assert g.edges | comp.edges == all_pairs
    assert g.edges & comp.edges == set()


def test_density_below_tree_threshold_errors():
    with pytest.raises(ValueError, match="spanning-tree threshold"):
        random_connected_graph(8, 0.1, 0)


def test_determinism_and_density_nesting():
    a1 = random_connected_graph(9, 0.4, 42)
    a2 = random_connected_graph(9, 0.4, 42)
    assert a1.edges == a2.edges
    sparser = random_connected_graph(9, 0.3, 42)
    assert sparser.edges <= a1.edges  # same seed: edge sets nest across densities


def test_text_round_trip():
    g = random_connected_graph(6, 0.6, 13)
    again = graph_from_text(graph_to_text(g))
    assert again.n == g.n and again.edges == g.edges


def test_text_rejects_garbage():
    with pytest.raises(ValueError):
        graph_from_text("")
    with pytest.raises(ValueError):
        graph_from_text("3 2\n0 1\n")  # missing an edge line


def test_rejects_self_loops_and_bad_edges():
    with pytest.raises(ValueError):
        HardwareGraph.from_pairs(3, [(0, 0)])
    with pytest.raises(ValueError):
        HardwareGraph(3, frozenset({(0, 5)}))
