from __future__ import annotations

import numpy as np
import pytest

from swapfree import (
    HardwareGraph,
    ProblemMatrix,
    build_problem_matrix,
    random_connected_graph,
    similarity_from_correlation,
    synthetic_correlation,
)


def make_instance(
    n: int,
    density: float = 0.5,
    seed: int = 0,
    m: int | None = None,
    k: int = 2,
    alpha: float = 1.0,
    beta: float = 1.0,
) -> tuple[HardwareGraph, ProblemMatrix]:
    graph = random_connected_graph(n, density, seed)
    m = n if m is None else m
    corr = synthetic_correlation(m, seed + 1)
    sim = similarity_from_correlation(corr)
    return graph, build_problem_matrix(sim, alpha, beta, k, n)


def random_symmetric(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n))
    return (a + a.T) / 2.0


@pytest.fixture
def small_instance():
    return make_instance(6, 0.5, seed=11)
