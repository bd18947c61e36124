"""Placement heuristics: spectral and randomized orders matched onto the hardware graph."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

from .graphs import HardwareGraph
from .permutations import Permutation
from .rng import SplitMix64, derive_seed
from .sdp import DEFAULT_TOL, SdpCertificate, solve_fixed_p_sdp
from .similarity import ProblemMatrix
from .spectral import SpectralOrder, perron_order, signed_top_order


class Heuristic(str, Enum):
    PERRON_DISCONNECTED = "perron-disc"
    PERRON_CONNECTED = "perron-conn"
    LAPLACIAN_CONNECTED = "laplacian-conn"
    COMPLETELY_RANDOM_DISCONNECTED = "crand-disc"
    PARTIALLY_RANDOM_DISCONNECTED = "prand-disc"
    COMPLETELY_RANDOM_CONNECTED = "crand-conn"
    PARTIALLY_RANDOM_CONNECTED = "prand-conn"


RANDOM_HEURISTICS = frozenset(
    {
        Heuristic.COMPLETELY_RANDOM_DISCONNECTED,
        Heuristic.PARTIALLY_RANDOM_DISCONNECTED,
        Heuristic.COMPLETELY_RANDOM_CONNECTED,
        Heuristic.PARTIALLY_RANDOM_CONNECTED,
    }
)

ALL_HEURISTICS = tuple(Heuristic)


@dataclass(frozen=True)
class HeuristicKind:
    """Heuristic selector plus sampling parameters for the random variants."""

    kind: Heuristic
    samples: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.kind in RANDOM_HEURISTICS and self.samples < 1:
            raise ValueError("random heuristics need samples >= 1")


def _order_ranks(order) -> list[int]:
    """Accept a SpectralOrder, Permutation, or plain sequence of ranked indices."""
    if isinstance(order, SpectralOrder):
        return list(order.order.map)
    if isinstance(order, Permutation):
        return list(order.map)
    return [int(v) for v in order]


def _pad_ranks(ranks_m: Sequence[int], n: int) -> list[int]:
    # padded indices carry no weight; they rank below every genuine asset
    ranks = list(ranks_m)
    ranks.extend(range(len(ranks_m), n))
    return ranks


def problem_order_perron(chat: ProblemMatrix) -> list[int]:
    """Perron order of the source similarity block, padded indices appended."""
    order = perron_order(chat.source.values)
    return _pad_ranks(order.order.map, chat.n)


def problem_order_top_eigen(chat: ProblemMatrix) -> list[int]:
    """Descending top-eigenvector order of the genuine objective block, padded appended."""
    block = chat.chat[: chat.m, : chat.m]
    order = signed_top_order(block)
    return _pad_ranks(order.order.map, chat.n)


def _match_orders(vertex_ranks: Sequence[int], index_ranks: Sequence[int]) -> Permutation:
    """Rank-r index goes to the rank-r vertex."""
    out = [0] * len(vertex_ranks)
    for r, v in enumerate(vertex_ranks):
        out[v] = index_ranks[r]
    return Permutation(tuple(out))


def perron_disconnected(chat: ProblemMatrix, graph: HardwareGraph) -> Permutation:
    """Match Perron-central indices to Perron-central vertices, ignoring connectivity."""
    pi = perron_order(graph.adjacency())
    sigma = problem_order_perron(chat)
    return _match_orders(pi.order.map, sigma)


def connected_heuristic(order_g, order_c, graph: HardwareGraph) -> Permutation:
    """Greedy connectivity-aware matching.

    The top-ranked index starts on the top-ranked vertex; each next index goes
    to the best-ranked unused vertex adjacent to the already-assigned set, so
    every prefix of assigned vertices induces a connected subgraph.
    """
    n = graph.n
    vertex_ranks = _order_ranks(order_g)
    index_ranks = _order_ranks(order_c)
    rank_of = [0] * n
    for r, v in enumerate(vertex_ranks):
        rank_of[v] = r

    assignment = [-1] * n
    start = vertex_ranks[0]
    assignment[start] = index_ranks[0]
    in_set = [False] * n
    in_set[start] = True
    frontier = set(graph.neighbors(start))
    for step in range(1, n):
        if not frontier:
            raise RuntimeError("assigned set has no unused neighbors; graph is disconnected")
        v = min(frontier, key=lambda w: rank_of[w])
        assignment[v] = index_ranks[step]
        in_set[v] = True
        frontier.discard(v)
        frontier.update(w for w in graph.neighbors(v) if not in_set[w])
    return Permutation(tuple(assignment))


def perron_connected(chat: ProblemMatrix, graph: HardwareGraph) -> Permutation:
    return connected_heuristic(
        perron_order(graph.adjacency()), problem_order_perron(chat), graph
    )


def laplacian_connected(chat: ProblemMatrix, graph: HardwareGraph) -> Permutation:
    """Connectivity-aware matching driven by the top Laplacian eigenvector of G
    and the top eigenvector of the objective matrix."""
    from .spectral import laplacian_order

    return connected_heuristic(laplacian_order(graph), problem_order_top_eigen(chat), graph)


def random_connected_assignment(rng: SplitMix64, sigma: Sequence[int],
                                graph: HardwareGraph) -> Permutation:
    """Assign sigma's indices onto a randomly grown connected vertex set:
    random start, then a uniform choice among unused neighbors each step."""
    n = graph.n
    assignment = [-1] * n
    start = rng.randint(n)
    assignment[start] = sigma[0]
    in_set = [False] * n
    in_set[start] = True
    frontier = set(graph.neighbors(start))
    for step in range(1, n):
        if not frontier:
            raise RuntimeError("graph is disconnected")
        choices = sorted(frontier)
        v = choices[rng.randint(len(choices))]
        assignment[v] = sigma[step]
        in_set[v] = True
        frontier.discard(v)
        frontier.update(w for w in graph.neighbors(v) if not in_set[w])
    return Permutation(tuple(assignment))


def _sample_permutation(kind: Heuristic, rng: SplitMix64, chat: ProblemMatrix,
                        graph: HardwareGraph, sigma_perron: list[int]) -> Permutation:
    n = graph.n
    if kind is Heuristic.COMPLETELY_RANDOM_DISCONNECTED:
        sigma = rng.permutation(n)
        pi = rng.permutation(n)
        return _match_orders(pi, sigma)
    if kind is Heuristic.PARTIALLY_RANDOM_DISCONNECTED:
        pi = rng.permutation(n)
        return _match_orders(pi, sigma_perron)
    sigma = rng.permutation(n) if kind is Heuristic.COMPLETELY_RANDOM_CONNECTED else sigma_perron
    return random_connected_assignment(rng, sigma, graph)


SolveCallback = Callable[[ProblemMatrix, HardwareGraph, Permutation], SdpCertificate]


def random_placements(
    kind: HeuristicKind,
    chat: ProblemMatrix,
    graph: HardwareGraph,
    solve: SolveCallback | None = None,
) -> tuple[Permutation, SdpCertificate]:
    """Best-of-m randomized placement: sample kind.samples permutations from a
    seeded stream, solve each, keep the minimum (lambda, lexicographic map)."""
    if kind.kind not in RANDOM_HEURISTICS:
        raise ValueError(f"{kind.kind.value} is not a randomized heuristic")
    if solve is None:
        solve = lambda c, g, p: solve_fixed_p_sdp(c, g, p, DEFAULT_TOL)
    rng = SplitMix64(derive_seed(kind.seed, ALL_HEURISTICS.index(kind.kind)))
    sigma_perron = problem_order_perron(chat) if kind.kind in (
        Heuristic.PARTIALLY_RANDOM_DISCONNECTED,
        Heuristic.PARTIALLY_RANDOM_CONNECTED,
    ) else []
    best: tuple[float, tuple[int, ...]] | None = None
    best_pair: tuple[Permutation, SdpCertificate] | None = None
    for _ in range(kind.samples):
        perm = _sample_permutation(kind.kind, rng, chat, graph, sigma_perron)
        cert = solve(chat, graph, perm)
        key = (cert.lam, perm.map)
        if best is None or key < best:
            best = key
            best_pair = (perm, cert)
    assert best_pair is not None
    return best_pair


def run_heuristic(
    kind: HeuristicKind,
    chat: ProblemMatrix,
    graph: HardwareGraph,
    solve: SolveCallback | None = None,
) -> tuple[Permutation, SdpCertificate]:
    """Dispatch one heuristic by kind; returns its placement and certificate."""
    if solve is None:
        solve = lambda c, g, p: solve_fixed_p_sdp(c, g, p, DEFAULT_TOL)
    if kind.kind in RANDOM_HEURISTICS:
        return random_placements(kind, chat, graph, solve)
    builders = {
        Heuristic.PERRON_DISCONNECTED: perron_disconnected,
        Heuristic.PERRON_CONNECTED: perron_connected,
        Heuristic.LAPLACIAN_CONNECTED: laplacian_connected,
    }
    perm = builders[kind.kind](chat, graph)
    return perm, solve(chat, graph, perm)
