from __future__ import annotations

import numpy as np
import pytest

from swapfree import (
    ALL_HEURISTICS,
    HardwareGraph,
    Heuristic,
    HeuristicKind,
    Permutation,
    build_problem_matrix,
    connected_heuristic,
    laplacian_connected,
    perron_connected,
    perron_disconnected,
    random_placements,
    run_heuristic,
    similarity_from_correlation,
)
from swapfree.placement import RANDOM_HEURISTICS
from swapfree.spectral import SpectralOrder, descending_order

from conftest import make_instance


def order_of(vector) -> SpectralOrder:
    v = np.asarray(vector, dtype=float)
    return SpectralOrder(vector=v, order=descending_order(v), eigenvalue=1.0)


def sim_matrix(values: np.ndarray):
    return similarity_from_correlation(1.0 + np.log(1.0 - values))


def prefix_connected(perm: Permutation, order_assigned: list[int], graph: HardwareGraph) -> bool:
    """Vertices receiving the first i indices must induce a connected subgraph."""
    inv = perm.inverse().map  # index -> vertex
    for i in range(1, graph.n + 1):
        verts = {inv[idx] for idx in order_assigned[:i]}
        seen = {next(iter(verts))}
        stack = list(seen)
        while stack:
            v = stack.pop()
            for w in graph.neighbors(v):
                if w in verts and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != verts:
            return False
    return True


def test_identity_orders_give_identity_permutation():
    # a path's Perron order is not identity, so build matched structures instead
    graph, chat = make_instance(5, 0.6, seed=4)
    from swapfree.placement import problem_order_perron
    from swapfree.spectral import perron_order

    pi = perron_order(graph.adjacency())
    sigma = problem_order_perron(chat)
    perm = perron_disconnected(chat, graph)
    # rank-r index mapped to rank-r vertex
    for r in range(5):
        assert perm.map[pi.order.map[r]] == sigma[r]


def test_pi_equals_sigma_gives_identity():
    # complete graph and uniform similarity: both orders are the identity
    graph = HardwareGraph.complete(3)
    c = np.full((3, 3), 0.4)
    np.fill_diagonal(c, 0.0)
    chat = build_problem_matrix(sim_matrix(c), 1.0, 1.0, 1, 3)
    assert perron_disconnected(chat, graph).map == (0, 1, 2)


def test_star_center_gets_heaviest_asset():
    graph = HardwareGraph.star(4)
    # asset 2 dominates the similarity mass
    c = np.array(
        [
            [0.0, 0.1, 0.6, 0.1],
            [0.1, 0.0, 0.6, 0.1],
            [0.6, 0.6, 0.0, 0.6],
            [0.1, 0.1, 0.6, 0.0],
        ]
    )
    chat = build_problem_matrix(sim_matrix(c), 1.0, 1.0, 2, 4)
    perm = perron_disconnected(chat, graph)
    assert perm.map[0] == 2  # star center hosts asset 2


def test_connected_heuristic_hand_trace():
    # path 0-1-2, graph ranks (1,0,2), sigma identity:
    # index0 -> vertex1, index1 -> vertex0, index2 -> vertex2
    graph = HardwareGraph.path(3)
    perm = connected_heuristic(order_of([0.5, 0.9, 0.1]), Permutation.identity(3), graph)
    assert perm.map == (1, 0, 2)


def test_complete_graph_reduces_to_disconnected_variant():
    graph, chat = make_instance(6, 1.0, seed=6)
    assert perron_connected(chat, graph).map == perron_disconnected(chat, graph).map


def test_connected_prefixes_for_deterministic_heuristics():
    for seed in range(6):
        graph, chat = make_instance(7, 0.4, seed=seed)
        for builder in (perron_connected, laplacian_connected):
            perm = builder(chat, graph)
            from swapfree.placement import problem_order_perron

            sigma = problem_order_perron(chat) if builder is perron_connected else None
            if sigma is None:
                from swapfree.placement import problem_order_top_eigen

                sigma = problem_order_top_eigen(chat)
            assert prefix_connected(perm, sigma, graph)


def test_every_heuristic_returns_bijection():
    graph, chat = make_instance(6, 0.5, seed=10)
    for i, h in enumerate(ALL_HEURISTICS):
        kind = HeuristicKind(kind=h, samples=3, seed=i)
        perm, cert = run_heuristic(kind, chat, graph)
        assert sorted(perm.map) == list(range(6))
        assert cert.status == "optimal"


def test_determinism_under_fixed_seed():
    graph, chat = make_instance(6, 0.5, seed=20)
    for h in ALL_HEURISTICS:
        kind = HeuristicKind(kind=h, samples=4, seed=77)
        p1, c1 = run_heuristic(kind, chat, graph)
        p2, c2 = run_heuristic(kind, chat, graph)
        assert p1.map == p2.map
        assert c1.lam == c2.lam


def test_best_of_m_is_nonincreasing_in_samples():
    graph, chat = make_instance(6, 0.4, seed=30)
    for h in RANDOM_HEURISTICS:
        lams = []
        for m in (1, 3, 10):
            kind = HeuristicKind(kind=h, samples=m, seed=5)
            _, cert = random_placements(kind, chat, graph)
            lams.append(cert.lam)
        assert lams[0] >= lams[1] - 1e-12 >= lams[2] - 2e-12


def test_connected_random_assignment_respects_prefixes():
    from swapfree.placement import random_connected_assignment
    from swapfree.rng import SplitMix64

    rng = SplitMix64(99)
    for seed in range(8):
        graph, _ = make_instance(7, 0.35, seed=40 + seed)
        sigma = list(rng.permutation(7))
        perm = random_connected_assignment(rng, sigma, graph)
        assert sorted(perm.map) == list(range(7))
        assert prefix_connected(perm, sigma, graph)


def test_sampler_rejects_deterministic_kind():
    graph, chat = make_instance(4, 0.8, seed=50)
    with pytest.raises(ValueError):
        random_placements(HeuristicKind(kind=Heuristic.PERRON_CONNECTED), chat, graph)


def test_padded_assets_rank_last():
    graph = HardwareGraph.complete(4)
    c = np.array([[0.0, 0.5], [0.5, 0.0]])
    chat = build_problem_matrix(sim_matrix(c), 1.0, 1.0, 1, 4)
    from swapfree.placement import problem_order_perron, problem_order_top_eigen

    assert problem_order_perron(chat)[-2:] == [2, 3]
    assert problem_order_top_eigen(chat)[-2:] == [2, 3]
