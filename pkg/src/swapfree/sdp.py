"""Fixed-permutation operator-norm approximation SDP, primal and dual.

Problem: given the objective matrix and a placement P, find the matrix X
supported on the diagonal plus the P-relabeled hardware edges that minimizes
the spectral norm of X - Chat. The two-sided bound is encoded as two PSD
blocks, lambda*I - (X - Chat) and lambda*I + (X - Chat), and handed to
cvxopt's conelp. All solves happen in the permuted (vertex) frame, where the
support mask depends only on the graph; results are mapped back.

The interior-point dual blocks Z1, Z2 satisfy tr(Z1 + Z2) = 1 and
(Z1 - Z2) = 0 on supported entries, so Y = Z2 - Z1 is feasible for the
nuclear-norm-budget dual and <Y, permuted Chat> certifies the optimum.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from cvxopt import matrix as cvx_matrix
from cvxopt import solvers as cvx_solvers

from .graphs import HardwareGraph
from .permutations import Permutation, apply_permutation
from .similarity import ProblemMatrix

DEFAULT_TOL = 1e-7

# Tightest settings first; cvxopt's scaling update can fail outright when
# pushed to machine precision, hence the guarded ladder.
_OPTION_LADDER = (
    {"abstol": 1e-9, "reltol": 1e-9, "feastol": 1e-9},
    {"abstol": 1e-8, "reltol": 1e-8, "feastol": 1e-8},
    {"abstol": 1e-7, "reltol": 1e-6, "feastol": 1e-7},
)

STATUS_OPTIMAL = "optimal"
STATUS_MAX_ITER = "max_iter"
STATUS_INFEASIBLE = "infeasible"


def _as_matrix(chat) -> np.ndarray:
    if isinstance(chat, ProblemMatrix):
        return chat.chat
    return np.asarray(chat, dtype=float)


@dataclass(frozen=True)
class SdpCertificate:
    """Solution of one fixed-P solve with its dual certificate.

    X lives in the original index frame (zero on non-edges of the P-relabeled
    graph); dual_Y lives in the permuted frame (zero on the diagonal and on
    edges of G). The gap pairs dual_Y with P^T Chat P, which equals pairing
    P dual_Y P^T with Chat.
    """

    lam: float
    X: np.ndarray
    dual_Y: np.ndarray
    primal_dual_gap: float
    status: str
    permutation: Permutation

    @property
    def n(self) -> int:
        return self.X.shape[0]

    def permuted_approximant(self) -> np.ndarray:
        """X expressed in the vertex frame: P^T X P."""
        return apply_permutation(self.permutation, self.X)

    def dual_in_original_frame(self) -> np.ndarray:
        return apply_permutation(self.permutation.inverse(), self.dual_Y)

    def dual_split(self) -> tuple[np.ndarray, np.ndarray]:
        """Positive/negative eigenparts (M, N) of dual_Y: the PSD pair with
        M - N = dual_Y minimizing tr(M + N)."""
        vals, vecs = np.linalg.eigh(self.dual_Y)
        pos = vecs @ np.diag(np.clip(vals, 0.0, None)) @ vecs.T
        neg = vecs @ np.diag(np.clip(-vals, 0.0, None)) @ vecs.T
        return pos, neg

    def to_json(self) -> str:
        payload = {
            "lambda": self.lam,
            "gap": self.primal_dual_gap,
            "status": self.status,
            "X": [[float(v) for v in row] for row in self.X],
            "Y": [[float(v) for v in row] for row in self.dual_Y],
            "permutation": list(self.permutation.map),
        }
        return json.dumps(payload, indent=2)

    @staticmethod
    def from_json(text: str) -> "SdpCertificate":
        d = json.loads(text)
        return SdpCertificate(
            lam=float(d["lambda"]),
            X=np.array(d["X"], dtype=float),
            dual_Y=np.array(d["Y"], dtype=float),
            primal_dual_gap=float(d["gap"]),
            status=str(d["status"]),
            permutation=Permutation.from_sequence(d["permutation"]),
        )


class SdpPrep:
    """Reusable conelp data for one hardware graph (support mask in vertex frame)."""

    def __init__(self, graph: HardwareGraph):
        self.graph = graph
        n = graph.n
        self.n = n
        allowed = np.eye(n, dtype=bool)
        for i, j in graph.sorted_edges:
            allowed[i, j] = allowed[j, i] = True
        self.allowed = allowed
        self.forbidden = ~allowed & ~np.eye(n, dtype=bool)
        self.complete = not self.forbidden.any()

        edges = graph.sorted_edges
        nvars = 1 + n + len(edges)
        self.nvars = nvars
        self.edges = edges
        g1 = np.zeros((n * n, nvars))
        g2 = np.zeros((n * n, nvars))
        eye_vec = np.eye(n).ravel(order="F")
        g1[:, 0] = -eye_vec
        g2[:, 0] = -eye_vec
        col = 1
        for i in range(n):
            g1[i * n + i, col] = 1.0
            g2[i * n + i, col] = -1.0
            col += 1
        for i, j in edges:
            for r in (j * n + i, i * n + j):
                g1[r, col] = 1.0
                g2[r, col] = -1.0
            col += 1
        self._g = cvx_matrix(np.vstack([g1, g2]))
        self._c = cvx_matrix(np.eye(nvars, 1))
        self._dims = {"l": 0, "q": [], "s": [n, n]}

    def solve_permuted(self, chat_p: np.ndarray) -> tuple[float, np.ndarray, np.ndarray, float, str]:
        """Solve min ||Y - chat_p||_op over the graph support, in the vertex frame.

        Returns (lam, Y, dual_Y, gap, status). lam is certified: it is inflated
        to the exact operator norm of Y - chat_p, so the primal pair is always
        feasible even when the solver under-reports.
        """
        n = self.n
        if self.complete:
            return 0.0, chat_p.copy(), np.zeros((n, n)), 0.0, STATUS_OPTIMAL

        h = cvx_matrix(np.concatenate([chat_p.ravel(order="F"), -chat_p.ravel(order="F")]))
        sol = None
        for opts in _OPTION_LADDER:
            options = dict(opts)
            options["show_progress"] = False
            options["maxiters"] = 100
            try:
                cand = cvx_solvers.conelp(self._c, self._g, h, dims=self._dims, options=options)
            except (ZeroDivisionError, ArithmeticError, ValueError):
                continue
            if cand["status"] == "optimal":
                sol = cand
                break
            if sol is None:
                sol = cand
        if sol is None or sol["x"] is None:
            raise RuntimeError("conelp failed on every tolerance setting")

        x = np.array(sol["x"]).ravel()
        y = np.zeros((n, n))
        y[np.arange(n), np.arange(n)] = x[1 : 1 + n]
        for t, (i, j) in enumerate(self.edges):
            y[i, j] = y[j, i] = x[1 + n + t]
        lam = max(float(x[0]), float(np.abs(np.linalg.eigvalsh(y - chat_p)).max()))

        z = np.array(sol["z"]).ravel()
        z1 = z[: n * n].reshape(n, n, order="F")
        z2 = z[n * n :].reshape(n, n, order="F")
        dual = np.where(self.forbidden, z2 - z1, 0.0)
        dual = (dual + dual.T) / 2.0
        nuc = float(np.abs(np.linalg.eigvalsh(dual)).sum())
        if nuc > 1.0:
            dual = dual / nuc
        gap = abs(lam - float((dual * chat_p).sum()))

        if sol["status"] == "optimal":
            status = STATUS_OPTIMAL
        elif sol["status"] in ("primal infeasible", "dual infeasible"):
            status = STATUS_INFEASIBLE
        else:
            status = STATUS_MAX_ITER
        return lam, y, dual, gap, status


@lru_cache(maxsize=32)
def _prep_for(graph: HardwareGraph) -> SdpPrep:
    return SdpPrep(graph)


def solve_fixed_p_sdp(
    chat, graph: HardwareGraph, perm: Permutation, tol: float = DEFAULT_TOL
) -> SdpCertificate:
    """Minimize lambda subject to ||X - Chat||_op <= lambda with X supported on
    the diagonal and the P-relabeled edges of the hardware graph."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    c = _as_matrix(chat)
    if c.shape != (graph.n, graph.n) or perm.n != graph.n:
        raise ValueError("dimension mismatch between matrix, graph and permutation")
    prep = _prep_for(graph)
    chat_p = apply_permutation(perm, c)
    lam, y, dual, gap, status = prep.solve_permuted(chat_p)
    x_orig = apply_permutation(perm.inverse(), y)
    if status == STATUS_OPTIMAL and gap > tol:
        status = STATUS_MAX_ITER
    return SdpCertificate(
        lam=lam, X=x_orig, dual_Y=dual, primal_dual_gap=gap, status=status, permutation=perm
    )


def solve_dual_sdp(
    chat, graph: HardwareGraph, perm: Permutation, tol: float = DEFAULT_TOL
) -> tuple[float, np.ndarray]:
    """Independent dual route: maximize <Y, P^T Chat P> subject to a unit
    nuclear-norm budget and Y vanishing on the diagonal and edges of G.

    Formulated and solved separately (cvxpy) from the primal interior-point
    path so the two sides cross-check each other.
    """
    import cvxpy as cp

    c = _as_matrix(chat)
    if c.shape != (graph.n, graph.n) or perm.n != graph.n:
        raise ValueError("dimension mismatch between matrix, graph and permutation")
    n = graph.n
    chat_p = apply_permutation(perm, c)
    prep = _prep_for(graph)
    if prep.complete:
        return 0.0, np.zeros((n, n))

    y = cp.Variable((n, n), symmetric=True)
    constraints = [cp.multiply(y, prep.allowed.astype(float)) == 0, cp.normNuc(y) <= 1]
    problem = cp.Problem(cp.Maximize(cp.sum(cp.multiply(y, chat_p))), constraints)
    value = None
    for solver in ("CLARABEL", "SCS"):
        try:
            if solver == "SCS":
                problem.solve(solver=solver, eps=min(tol, 1e-8), max_iters=200_000)
            else:
                problem.solve(solver=solver)
        except cp.error.SolverError:
            continue
        if problem.status in ("optimal", "optimal_inaccurate"):
            value = float(problem.value)
            break
    if value is None:
        raise RuntimeError("dual SDP solve failed")

    y_val = np.asarray(y.value, dtype=float)
    y_val = np.where(prep.forbidden, (y_val + y_val.T) / 2.0, 0.0)
    nuc = float(np.abs(np.linalg.eigvalsh(y_val)).sum())
    if nuc > 1.0:
        y_val = y_val / nuc
    return float((y_val * chat_p).sum()), y_val


def feasible_upper_bound(chat, graph: HardwareGraph, perm: Permutation) -> float:
    """Operator norm of the part of the permuted matrix that falls outside the
    hardware support; attained by the feasible point X = Chat on the support."""
    c = _as_matrix(chat)
    prep = _prep_for(graph)
    chat_p = apply_permutation(perm, c)
    masked = np.where(prep.forbidden, chat_p, 0.0)
    if not masked.any():
        return 0.0
    return float(np.abs(np.linalg.eigvalsh(masked)).max())
