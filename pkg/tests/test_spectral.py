from __future__ import annotations

import numpy as np
import pytest

from swapfree import HardwareGraph, laplacian_order, perron_order, top_eigenpair
from swapfree.spectral import descending_order, signed_top_order

from conftest import random_symmetric


def eig_oracle_top(m):
    vals, vecs = np.linalg.eigh(m)
    return vals[-1], vecs[:, -1]


def test_perron_triangle():
    order = perron_order(HardwareGraph.complete(3).adjacency())
    assert abs(order.eigenvalue - 2.0) < 1e-9
    assert np.allclose(order.vector, np.ones(3) / np.sqrt(3), atol=1e-9)
    assert order.order.map == (0, 1, 2)


def test_perron_path_matches_eig_oracle():
    a = HardwareGraph.path(3).adjacency()
    order = perron_order(a)
    val, vec = eig_oracle_top(a)
    assert abs(order.eigenvalue - np.sqrt(2)) < 1e-9
    assert abs(order.eigenvalue - val) < 1e-9
    vec = np.abs(vec)
    assert np.allclose(order.vector, vec / np.linalg.norm(vec), atol=1e-8)
    assert order.order.map == (1, 0, 2)  # middle vertex first, tie 0 before 2


def test_perron_star_center_ranks_first():
    order = perron_order(HardwareGraph.star(4).adjacency())
    assert order.order.map[0] == 0


def test_perron_scale_invariance():
    m = np.abs(random_symmetric(6, 3)) + 0.1
    np.fill_diagonal(m, 0.0)
    o1 = perron_order(m)
    o2 = perron_order(4.7 * m)
    assert o1.order.map == o2.order.map


def test_perron_rejects_disconnected_support():
    m = np.zeros((4, 4))
    m[0, 1] = m[1, 0] = 1.0
    m[2, 3] = m[3, 2] = 1.0
    with pytest.raises(ValueError, match="disconnected"):
        perron_order(m)


def test_perron_rejects_negative_entries():
    with pytest.raises(ValueError, match="nonnegative"):
        perron_order(np.array([[0.0, -1.0], [-1.0, 0.0]]))


def test_residual_invariant_on_random_matrices():
    for seed in range(8):
        m = random_symmetric(7, seed)
        theta, v = top_eigenpair(m, start=np.arange(1.0, 8.0))
        assert np.abs(m @ v - theta * v).max() <= 1e-10 * np.abs(m).sum(axis=1).max()


def test_top_eigenpair_picks_largest_signed_eigenvalue():
    for seed in range(6):
        m = random_symmetric(6, 100 + seed)
        val, _ = eig_oracle_top(m)
        order = signed_top_order(m)
        assert abs(order.eigenvalue - val) < 1e-8


def test_laplacian_triangle_eigenvalue_three():
    order = laplacian_order(HardwareGraph.complete(3))
    assert abs(order.eigenvalue - 3.0) < 1e-9


def test_laplacian_single_edge():
    order = laplacian_order(HardwareGraph.complete(2))
    assert abs(order.eigenvalue - 2.0) < 1e-12
    assert np.allclose(order.vector, np.array([1.0, -1.0]) / np.sqrt(2), atol=1e-9)


def test_laplacian_path_three():
    order = laplacian_order(HardwareGraph.path(3))
    assert abs(order.eigenvalue - 3.0) < 1e-9
    # eigenvector proportional to (1, -2, 1); sign rule flips the peak positive
    assert order.order.map == (1, 0, 2)


def test_zero_matrix_degenerates_gracefully():
    theta, v = top_eigenpair(np.zeros((4, 4)))
    assert theta == 0.0
    assert abs(np.linalg.norm(v) - 1.0) < 1e-12


def test_descending_order_tie_break():
    order = descending_order(np.array([0.5, 0.7, 0.5, 0.9]))
    assert order.map == (3, 1, 0, 2)
