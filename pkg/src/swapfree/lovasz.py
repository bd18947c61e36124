"""Lovász number of the hardware graph and the spectral-norm bound built on it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from cvxopt import matrix as cvx_matrix
from cvxopt import solvers as cvx_solvers
from cvxopt import spmatrix

from .bruteforce import brute_force_permutations
from .graphs import HardwareGraph
from .permutations import Permutation
from .sdp import DEFAULT_TOL, solve_fixed_p_sdp
from .similarity import SimilarityMatrix, build_problem_matrix, laplacian_part


def lovasz_theta(graph: HardwareGraph, tol: float = DEFAULT_TOL) -> float:
    """theta(G) = max <J, X> s.t. tr X = 1, X_ij = 0 on edges, X PSD."""
    n = graph.n
    if n == 1:
        return 1.0
    edge_set = graph.edges
    nonedges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edge_set
    ]
    nvars = n + len(nonedges)

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    obj = np.zeros(nvars)
    for i in range(n):
        rows.append(i * n + i)
        cols.append(i)
        vals.append(-1.0)
        obj[i] = -1.0
    col = n
    for i, j in nonedges:
        rows.extend((i * n + j, j * n + i))
        cols.extend((col, col))
        vals.extend((-1.0, -1.0))
        obj[col] = -2.0
        col += 1

    g = spmatrix(vals, rows, cols, (n * n, nvars))
    h = cvx_matrix(np.zeros(n * n))
    a = cvx_matrix(np.array([[1.0] * n + [0.0] * len(nonedges)]))
    b = cvx_matrix([1.0])

    for opts in (
        {"abstol": 1e-9, "reltol": 1e-9, "feastol": 1e-9},
        {"abstol": 1e-8, "reltol": 1e-8, "feastol": 1e-8},
        {"abstol": max(tol, 1e-7), "reltol": max(tol, 1e-6), "feastol": 1e-7},
    ):
        options = dict(opts)
        options["show_progress"] = False
        options["maxiters"] = 200
        try:
            sol = cvx_solvers.conelp(
                cvx_matrix(obj), g, h, dims={"l": 0, "q": [], "s": [n]}, A=a, b=b, options=options
            )
        except (ZeroDivisionError, ArithmeticError, ValueError):
            continue
        if sol["status"] == "optimal":
            return -float(sol["primal objective"])
    raise RuntimeError("Lovász theta SDP did not converge")


@dataclass(frozen=True)
class BoundReport:
    """The spectral-norm bound in its stated and square-root forms, with context."""

    lambda_star: float
    feasible_ub: float
    lovasz_theta: float
    thm1_bound_stated: float
    thm1_bound_sqrt_variant: float
    lambda_star_method: str


def theorem1_bound(
    sim: SimilarityMatrix,
    alpha: float,
    graph: HardwareGraph,
    beta: float = 1.0,
    tol: float = DEFAULT_TOL,
    brute_force_max_n: int = 6,
) -> BoundReport:
    """Bound lambda* <= (1 - 1/theta(G)) * (alpha/2) * <L, L> with L = Diag(C 1) - C.

    Also reports the sqrt(<L,L>) variant. lambda* comes from brute force for
    small graphs, otherwise from the best of the deterministic placement
    heuristics (an upper bound on the true optimum, so a successful check
    still certifies the stated inequality).
    """
    lap = laplacian_part(sim)
    frob_sq = float((lap * lap).sum())
    theta = lovasz_theta(graph, tol)
    factor = (1.0 - 1.0 / theta) * (alpha / 2.0)
    stated = factor * frob_sq
    sqrt_variant = factor * float(np.sqrt(frob_sq))

    chat = build_problem_matrix(sim, alpha, beta, k=1, n_qubits=graph.n)
    if graph.n <= brute_force_max_n:
        _, cert = brute_force_permutations(chat, graph, tol=tol)
        lambda_star = cert.lam
        method = "brute-force"
    else:
        from .placement import laplacian_connected, perron_connected, perron_disconnected

        lambda_star = float("inf")
        for heuristic in (perron_disconnected, perron_connected, laplacian_connected):
            perm = heuristic(chat, graph)
            cert = solve_fixed_p_sdp(chat, graph, perm, tol)
            lambda_star = min(lambda_star, cert.lam)
        method = "heuristic-min"

    ub = feasible_ub_identity(chat, graph)
    return BoundReport(
        lambda_star=lambda_star,
        feasible_ub=ub,
        lovasz_theta=theta,
        thm1_bound_stated=stated,
        thm1_bound_sqrt_variant=sqrt_variant,
        lambda_star_method=method,
    )


def feasible_ub_identity(chat, graph: HardwareGraph) -> float:
    from .sdp import feasible_upper_bound

    return feasible_upper_bound(chat, graph, Permutation.identity(graph.n))
