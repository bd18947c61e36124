"""Extremal eigenpairs by power iteration, and the vertex orders they induce."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import HardwareGraph
from .permutations import Permutation
from .rng import SplitMix64, derive_seed

RESIDUAL_TOL = 1e-10
MAX_ITERATIONS = 100_000


@dataclass(frozen=True)
class SpectralOrder:
    """Eigenvector plus the permutation sorting its coordinates descending."""

    vector: np.ndarray
    order: Permutation  # order.map[r] = coordinate index with rank r
    eigenvalue: float


def descending_order(vector: np.ndarray) -> Permutation:
    """Coordinate indices sorted by descending value; ties broken by ascending index."""
    v = np.asarray(vector, dtype=float)
    ranked = sorted(range(len(v)), key=lambda i: (-v[i], i))
    return Permutation(tuple(ranked))


def top_eigenpair(
    m: np.ndarray,
    tol: float = RESIDUAL_TOL,
    max_iter: int = MAX_ITERATIONS,
    start: np.ndarray | None = None,
) -> tuple[float, np.ndarray]:
    """Eigenpair of the largest (signed) eigenvalue of a symmetric matrix.

    Power iteration on M + c*I with c = ||M||_inf, so the target eigenvalue
    strictly dominates in magnitude even for bipartite adjacency spectra.
    Converges when ||M v - theta v||_inf <= tol * ||M||_inf. If the start
    vector (all-ones by default) lands in the kernel of the shifted matrix,
    the iteration restarts from a fixed seeded vector.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(m, m.T, atol=1e-12, rtol=0.0):
        raise ValueError("matrix must be symmetric")

    scale = float(np.abs(m).sum(axis=1).max())
    if scale == 0.0:
        v = np.ones(n) / np.sqrt(n)
        return 0.0, v

    x = np.ones(n) if start is None else np.asarray(start, dtype=float).copy()
    nx = np.linalg.norm(x)
    if nx == 0.0:
        raise ValueError("start vector must be nonzero")
    x /= nx

    restarted = False
    for _ in range(max_iter):
        mx = m @ x
        theta = float(x @ mx)
        if np.abs(mx - theta * x).max() <= tol * scale:
            return theta, x
        y = mx + scale * x
        ny = np.linalg.norm(y)
        if ny <= 1e-300:
            if restarted:
                raise RuntimeError("power iteration start degenerate after restart")
            x = _seeded_start(n)
            restarted = True
            continue
        x = y / ny
    raise RuntimeError(f"power iteration did not converge within {max_iter} iterations")


def _seeded_start(n: int) -> np.ndarray:
    rng = SplitMix64(derive_seed(0x5EED, n))
    x = np.array([rng.uniform() - 0.5 for _ in range(n)])
    return x / np.linalg.norm(x)


def _support_connected(m: np.ndarray) -> bool:
    n = m.shape[0]
    if n == 1:
        return True
    adj = [np.flatnonzero(m[i]) for i in range(n)]
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            w = int(w)
            if w != v and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def perron_order(m: np.ndarray) -> SpectralOrder:
    """Perron eigenpair of a symmetric nonnegative matrix with connected support."""
    m = np.asarray(m, dtype=float)
    if m.min() < -1e-12:
        raise ValueError("matrix must be entrywise nonnegative")
    if not _support_connected(m):
        raise ValueError("disconnected support: Perron order is not unique")
    theta, v = top_eigenpair(m)
    # all-ones start on a nonnegative shifted matrix keeps iterates nonnegative
    v = np.clip(v, 0.0, None)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        raise RuntimeError("Perron vector collapsed to zero")
    v = v / nv
    return SpectralOrder(vector=v, order=descending_order(v), eigenvalue=theta)


def signed_top_order(m: np.ndarray) -> SpectralOrder:
    """Order induced by the top eigenvector of a general symmetric matrix.

    Sign fixed so the largest-magnitude coordinate is positive (first index on ties).
    """
    theta, v = top_eigenpair(np.asarray(m, dtype=float), start=_seeded_start(len(m)))
    peak = int(np.argmax(np.abs(v)))
    if v[peak] < 0.0:
        v = -v
    return SpectralOrder(vector=v, order=descending_order(v), eigenvalue=theta)


def laplacian_order(g: HardwareGraph) -> SpectralOrder:
    """Order from the eigenvector of the largest Laplacian eigenvalue of G."""
    return signed_top_order(g.laplacian())
