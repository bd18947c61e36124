"""Hardware connectivity graphs: simple undirected graphs over qubit indices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .rng import SplitMix64, derive_seed


def _round_half_up(x: float) -> int:
    # round() with halves going up, pinned for cross-platform stability
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class HardwareGraph:
    """Simple undirected graph on vertices 0..n-1 (no loops, no multi-edges)."""

    n: int
    edges: frozenset[tuple[int, int]]  # pairs stored as (i, j) with i < j

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        for e in self.edges:
            i, j = e
            if not (0 <= i < j < self.n):
                raise ValueError(f"bad edge {e} for n={self.n}")

    @staticmethod
    def from_pairs(n: int, pairs) -> "HardwareGraph":
        """Normalize arbitrary (i, j) pairs into canonical i < j form."""
        canon = set()
        for i, j in pairs:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            canon.add((min(i, j), max(i, j)))
        return HardwareGraph(n, frozenset(canon))

    @staticmethod
    def complete(n: int) -> "HardwareGraph":
        return HardwareGraph.from_pairs(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @staticmethod
    def path(n: int) -> "HardwareGraph":
        return HardwareGraph.from_pairs(n, [(i, i + 1) for i in range(n - 1)])

    @staticmethod
    def cycle(n: int) -> "HardwareGraph":
        return HardwareGraph.from_pairs(n, [(i, (i + 1) % n) for i in range(n)])

    @staticmethod
    def star(n: int) -> "HardwareGraph":
        """Star with center 0 and n-1 leaves."""
        return HardwareGraph.from_pairs(n, [(0, i) for i in range(1, n)])

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a

    def laplacian(self) -> np.ndarray:
        a = self.adjacency()
        return np.diag(a.sum(axis=1)) - a

    def complement(self) -> "HardwareGraph":
        missing = [
            (i, j)
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if (i, j) not in self.edges
        ]
        return HardwareGraph.from_pairs(self.n, missing)

    @cached_property
    def neighbor_lists(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        return tuple(tuple(sorted(x)) for x in nbrs)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.neighbor_lists[v]

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.neighbor_lists[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def bfs_distances(self, source: int) -> list[int]:
        """Hop distances from source; -1 for unreachable vertices."""
        dist = [-1] * self.n
        dist[source] = 0
        frontier = [source]
        while frontier:
            nxt = []
            for v in frontier:
                for w in self.neighbor_lists[v]:
                    if dist[w] < 0:
                        dist[w] = dist[v] + 1
                        nxt.append(w)
            frontier = nxt
        return dist


def density_edge_count(n: int, density: float) -> int:
    """Edge target for a density: round(density * C(n,2)), halves up."""
    return _round_half_up(density * (n * (n - 1) // 2))


def random_connected_graph(n: int, density: float, seed: int) -> HardwareGraph:
    """Connected graph with exactly round(density * C(n,2)) edges.

    Construction: random spanning tree, then a uniformly sampled prefix of the
    shuffled non-tree pairs. For a fixed seed the edge sets are nested across
    increasing densities.
    """
    if not (0.0 < density <= 1.0):
        raise ValueError("density must lie in (0, 1]")
    target = density_edge_count(n, density)
    if target < n - 1:
        raise ValueError("density below spanning-tree threshold")
    return connected_graph_with_edges(n, target, seed)


def connected_graph_with_edges(n: int, edge_count: int, seed: int) -> HardwareGraph:
    """Connected graph with an explicit edge count >= n-1 (tree plus extras)."""
    if n < 2:
        raise ValueError("need n >= 2")
    total_pairs = n * (n - 1) // 2
    if not (n - 1 <= edge_count <= total_pairs):
        raise ValueError(f"edge count {edge_count} infeasible for n={n}")

    rng = SplitMix64(derive_seed(seed, n))
    order = rng.permutation(n)
    tree = set()
    for idx in range(1, n):
        attach = order[rng.randint(idx)]
        v = order[idx]
        tree.add((min(v, attach), max(v, attach)))

    rest = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if (i, j) not in tree
    ]
    rng.shuffle(rest)
    edges = set(tree)
    edges.update(rest[: edge_count - len(tree)])
    return HardwareGraph(n, frozenset(edges))


def graph_to_text(g: HardwareGraph) -> str:
    """Serialize as 'n m' header plus one 'i j' line per edge (0-based)."""
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{i} {j}" for i, j in g.sorted_edges)
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> HardwareGraph:
    rows = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not rows:
        raise ValueError("empty graph file")
    n, m = (int(t) for t in rows[0].split())
    pairs = []
    for ln in rows[1 : m + 1]:
        i, j = (int(t) for t in ln.split())
        pairs.append((i, j))
    if len(pairs) != m:
        raise ValueError(f"expected {m} edges, found {len(pairs)}")
    return HardwareGraph.from_pairs(n, pairs)
