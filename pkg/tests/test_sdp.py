from __future__ import annotations

import itertools

import numpy as np
import pytest

from swapfree import (
    HardwareGraph,
    Permutation,
    SdpCertificate,
    apply_permutation,
    feasible_upper_bound,
    solve_dual_sdp,
    solve_fixed_p_sdp,
)
from swapfree.sdp import _prep_for

from conftest import make_instance

TOL = 1e-7


def certificate_checks(cert: SdpCertificate, chat: np.ndarray, graph: HardwareGraph):
    """The full invariant set a certificate must satisfy."""
    n = graph.n
    perm = cert.permutation
    # X vanishes exactly on non-edges of the permuted graph
    a_bar_perm = np.zeros((n, n), dtype=bool)
    inv = perm.inverse().map
    for i in range(n):
        for j in range(n):
            if i != j and (min(inv[i], inv[j]), max(inv[i], inv[j])) not in graph.edges:
                a_bar_perm[i, j] = True
    if a_bar_perm.any():
        assert np.abs(cert.X[a_bar_perm]).max() == 0.0
    # two-sided eigenvalue bound within 1e-8
    diff = cert.X - chat
    w = np.linalg.eigvalsh(diff)
    assert w.max() <= cert.lam + 1e-8
    assert w.min() >= -cert.lam - 1e-8
    # dual support and budget
    prep = _prep_for(graph)
    assert np.abs(cert.dual_Y[prep.allowed]).max() == 0.0
    assert np.abs(np.linalg.eigvalsh(cert.dual_Y)).sum() <= 1.0 + 1e-8
    # gap definition: dual pairs with the permuted matrix
    chat_p = apply_permutation(perm, chat)
    assert abs(abs(cert.lam - (cert.dual_Y * chat_p).sum()) - cert.primal_dual_gap) < 1e-12


def test_complete_graph_is_exact():
    graph, chat = make_instance(5, 1.0, seed=1)
    cert = solve_fixed_p_sdp(chat, graph, Permutation.identity(5), TOL)
    assert cert.lam == 0.0
    assert np.array_equal(cert.X, chat.chat)
    assert cert.status == "optimal"
    # lambda = 0 implies the approximant is the matrix itself
    assert np.abs(cert.X - chat.chat).max() <= 1e-7


def test_edgeless_two_qubit_analytic():
    graph = HardwareGraph(2, frozenset())
    a, b = 0.7, -0.45
    chat = np.array([[a, b], [b, a]])
    cert = solve_fixed_p_sdp(chat, graph, Permutation.identity(2), TOL)
    assert abs(cert.lam - abs(b)) < 1e-7
    assert np.abs(cert.X - a * np.eye(2)).max() < 1e-6
    value, y = solve_dual_sdp(chat, graph, Permutation.identity(2), TOL)
    assert abs(value - abs(b)) < 1e-6
    sign = -1.0 if b < 0 else 1.0
    assert np.allclose(y, sign / 2.0 * np.array([[0.0, 1.0], [1.0, 0.0]]), atol=1e-6)


def test_dual_on_complete_graph_is_zero():
    graph, chat = make_instance(4, 1.0, seed=2)
    value, y = solve_dual_sdp(chat, graph, Permutation.identity(4), TOL)
    assert value == 0.0
    assert not y.any()


def test_lambda_below_masked_opnorm_bound():
    # paper's feasible point: lambda <= (alpha/2) ||C o A_bar||_op for identity P
    for seed in range(5):
        graph, chat = make_instance(7, 0.4, seed=seed, alpha=1.6)
        perm = Permutation.identity(7)
        cert = solve_fixed_p_sdp(chat, graph, perm, TOL)
        comp = graph.complement().adjacency()
        masked = chat.source.values * comp[:7, :7]
        bound = (chat.alpha / 2.0) * np.abs(np.linalg.eigvalsh(masked)).max()
        assert cert.lam <= bound + TOL
        assert cert.lam <= feasible_upper_bound(chat, graph, perm) + 1e-7
        certificate_checks(cert, chat.chat, graph)


def test_feasible_upper_bound_cases():
    graph, chat = make_instance(5, 1.0, seed=3)
    assert feasible_upper_bound(chat, graph, Permutation.identity(5)) == 0.0

    edgeless = HardwareGraph(2, frozenset())
    m = np.array([[0.3, -0.8], [-0.8, 0.3]])
    assert abs(feasible_upper_bound(m, edgeless, Permutation.identity(2)) - 0.8) < 1e-12


def test_duality_gap_on_random_instances():
    # independent dual solver cross-checks the primal engine
    count = 0
    for seed in range(100):
        n = 4 + seed % 5
        graph, chat = make_instance(n, 0.5 + 0.1 * (seed % 4), seed=seed)
        perm = Permutation.identity(n)
        cert = solve_fixed_p_sdp(chat, graph, perm, TOL)
        value, _ = solve_dual_sdp(chat, graph, perm, TOL)
        assert abs(cert.lam - value) <= 1e-6
        count += 1
    assert count == 100


def test_permutation_frame_equivalence():
    rng = np.random.default_rng(5)
    for seed in range(6):
        graph, chat = make_instance(6, 0.5, seed=seed)
        perm = Permutation.from_sequence(rng.permutation(6))
        cert_p = solve_fixed_p_sdp(chat, graph, perm, TOL)
        rotated = apply_permutation(perm, chat.chat)
        cert_id = solve_fixed_p_sdp(rotated, graph, Permutation.identity(6), TOL)
        assert abs(cert_p.lam - cert_id.lam) <= 1e-7
        certificate_checks(cert_p, chat.chat, graph)


def test_strong_duality_via_certificate_gap():
    for seed in range(20):
        graph, chat = make_instance(6, 0.4, seed=100 + seed)
        cert = solve_fixed_p_sdp(chat, graph, Permutation.identity(6), TOL)
        assert cert.primal_dual_gap <= max(TOL, 1e-6)


def weight_k_argmin(matrix: np.ndarray, k: int) -> tuple[np.ndarray, float]:
    n = matrix.shape[0]
    best = None
    for combo in itertools.combinations(range(n), k):
        z = np.zeros(n)
        z[list(combo)] = 1.0
        v = float(z @ matrix @ z)
        if best is None or v < best[1]:
            best = (z, v)
    return best


@pytest.mark.parametrize("n,k,seed", [(6, 2, 0), (8, 3, 1), (10, 2, 2)])
def test_sandwich_chain(n, k, seed):
    # x*^T C x* <= xt^T C xt <= xt^T Ct xt + lk <= x*^T Ct x* + lk <= x*^T C x* + 2lk
    graph, chat = make_instance(n, 0.5, seed=seed, k=k)
    cert = solve_fixed_p_sdp(chat, graph, Permutation.identity(n), TOL)
    c, ct, lam = chat.chat, cert.X, cert.lam
    x_star, v_star = weight_k_argmin(c, k)
    x_tilde, _ = weight_k_argmin(ct, k)
    slack = 1e-8
    a = v_star
    b = float(x_tilde @ c @ x_tilde)
    cc = float(x_tilde @ ct @ x_tilde) + lam * k
    d = float(x_star @ ct @ x_star) + lam * k
    e = v_star + 2.0 * lam * k
    assert a <= b + slack
    assert b <= cc + slack
    assert cc <= d + slack
    assert d <= e + slack


def test_dual_split_into_psd_parts():
    graph, chat = make_instance(6, 0.5, seed=21)
    cert = solve_fixed_p_sdp(chat, graph, Permutation.identity(6), TOL)
    m, n_part = cert.dual_split()
    assert np.linalg.eigvalsh(m).min() >= -1e-12
    assert np.linalg.eigvalsh(n_part).min() >= -1e-12
    assert np.abs((m - n_part) - cert.dual_Y).max() <= 1e-12
    # the eigenpart split attains the minimal trace budget, i.e. the nuclear norm
    assert abs(np.trace(m + n_part) - np.abs(np.linalg.eigvalsh(cert.dual_Y)).sum()) <= 1e-12


def test_certificate_json_round_trip(tmp_path):
    graph, chat = make_instance(5, 0.6, seed=8)
    cert = solve_fixed_p_sdp(chat, graph, Permutation((2, 0, 1, 4, 3)), TOL)
    text = cert.to_json()
    again = SdpCertificate.from_json(text)
    assert again.lam == cert.lam
    assert again.status == cert.status
    assert np.array_equal(again.X, cert.X)
    assert np.array_equal(again.dual_Y, cert.dual_Y)
    assert again.permutation.map == cert.permutation.map


def test_input_validation():
    graph, chat = make_instance(4, 0.8, seed=9)
    with pytest.raises(ValueError):
        solve_fixed_p_sdp(chat, graph, Permutation.identity(5), TOL)
    with pytest.raises(ValueError):
        solve_fixed_p_sdp(chat, graph, Permutation.identity(4), tol=-1.0)
