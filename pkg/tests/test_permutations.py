from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swapfree import Permutation, apply_permutation

from conftest import random_symmetric


def test_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


def test_matrix_has_one_entry_per_row_and_column():
    p = Permutation((2, 0, 1, 3))
    m = p.matrix()
    assert np.array_equal(m.sum(axis=0), np.ones(4))
    assert np.array_equal(m.sum(axis=1), np.ones(4))
    # matrix convention matches the index action: (P^T M P)[i,j] = M[p(i), p(j)]
    mat = random_symmetric(4, 0)
    assert np.array_equal(m.T @ mat @ m, apply_permutation(p, mat))


def test_identity_leaves_matrix_unchanged():
    m = random_symmetric(5, 1)
    assert np.array_equal(apply_permutation(Permutation.identity(5), m), m)


def test_swap_example():
    p = Permutation((1, 0))
    out = apply_permutation(p, np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert np.array_equal(out, np.array([[4.0, 3.0], [2.0, 1.0]]))


def test_similarity_preserves_eigenvalues():
    m = random_symmetric(6, 2)
    p = Permutation((3, 1, 4, 0, 5, 2))
    got = np.sort(np.linalg.eigvalsh(apply_permutation(p, m)))
    want = np.sort(np.linalg.eigvalsh(m))
    assert np.allclose(got, want, atol=1e-12)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_permutation(Permutation.identity(3), np.zeros((4, 4)))


@settings(max_examples=60, deadline=None)
@given(st.permutations(list(range(6))), st.integers(0, 2**31 - 1))
def test_inverse_round_trip(mapping, seed):
    p = Permutation.from_sequence(mapping)
    m = random_symmetric(6, seed)
    back = apply_permutation(p, apply_permutation(p.inverse(), m))
    assert np.array_equal(back, m)
    assert p.compose(p.inverse()).map == tuple(range(6))
