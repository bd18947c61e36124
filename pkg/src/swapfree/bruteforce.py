"""Exhaustive placement search: the minimum-lambda permutation over all n!.

Every permutation is accounted for, but most never reach the interior-point
solver: any feasible dual matrix Y gives the lower bound <Y, P^T Chat P> on
lambda(P), and a permutation whose bound already exceeds the running best by
more than the tie margin cannot be the optimum or tie it. The bounds are
evaluated for all permutations at once with batched tensor ops, and the
survivors are solved in ascending order of their feasible upper bounds so the
best value drops early. Results are exactly those of full enumeration,
including the lexicographic tie rule.
"""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np

from .graphs import HardwareGraph
from .permutations import Permutation, apply_permutation
from .sdp import DEFAULT_TOL, SdpCertificate, _as_matrix, _prep_for

BRUTE_FORCE_CAP = 8
TIE_EPS = 1e-9
_CHUNK = 50_000  # bounds the (chunk, n, n) batch arrays to tens of MB


def brute_force_permutations(
    chat,
    graph: HardwareGraph,
    tol: float = DEFAULT_TOL,
    force: bool = False,
    seed_perms: tuple[Permutation, ...] = (),
) -> tuple[Permutation, SdpCertificate]:
    """Globally minimize lambda over all permutations of the placement.

    Ties within TIE_EPS of the minimum resolve to the lexicographically
    smallest permutation map. seed_perms only accelerate pruning (good
    placements found elsewhere); they never change the result.
    """
    c = _as_matrix(chat)
    n = graph.n
    if c.shape != (n, n):
        raise ValueError("matrix and graph dimensions differ")
    if n > BRUTE_FORCE_CAP and not force:
        raise ValueError(
            f"brute force over {n}! permutations exceeds the n={BRUTE_FORCE_CAP} cap; "
            "pass force=True to override"
        )

    prep = _prep_for(graph)
    identity = Permutation.identity(n)
    if prep.complete:
        lam, y, dual, gap, status = prep.solve_permuted(c)
        return identity, SdpCertificate(
            lam=lam, X=y, dual_Y=dual, primal_dual_gap=gap, status=status, permutation=identity
        )

    # margin absorbing eigensolver noise in the bound values; pruning must
    # only ever discard permutations strictly outside the tie window
    safety = 1e-11 * (1.0 + float(np.abs(c).max()) * n)
    forbidden = prep.forbidden.astype(float)

    best = np.inf
    # entries: (map_tuple, lam, permuted Y, dual, gap, status)
    candidates: list[tuple] = []
    pool: deque[np.ndarray] = deque(maxlen=16)

    def solve_map(map_tuple: tuple[int, ...]) -> float:
        nonlocal best
        idx = np.asarray(map_tuple, dtype=np.intp)
        chat_p = c[np.ix_(idx, idx)]
        lam, y, dual, gap, status = prep.solve_permuted(chat_p)
        pool.append(dual)
        if lam < best:
            best = lam
            candidates[:] = [e for e in candidates if e[1] <= best + TIE_EPS]
        if lam <= best + TIE_EPS:
            candidates.append((map_tuple, lam, y, dual, gap, status))
        return lam

    seeds = {identity.map}
    seeds.update(p.map for p in seed_perms if p.n == n)
    for map_tuple in sorted(seeds):
        solve_map(map_tuple)
    seed_pool = np.array(list(pool))

    solved = set(seeds)
    for chunk in _permutation_chunks(n):
        chunk_arr = np.asarray(chunk, dtype=np.intp)
        chats = c[chunk_arr[:, :, None], chunk_arr[:, None, :]]
        lbs = np.einsum("pij,kij->pk", chats, seed_pool, optimize=True).max(axis=1)
        keep = np.flatnonzero(lbs <= best + TIE_EPS + safety)
        # cheap feasible upper bounds order the survivors so good solves land early
        ubs = np.abs(np.linalg.eigvalsh(chats[keep] * forbidden[None, :, :])).max(axis=1)
        remaining = keep[np.argsort(ubs, kind="stable")]
        # alternate small solve batches with vectorized re-pruning against the
        # freshly grown dual pool; the survivor set collapses within a few rounds
        batch_size = 4
        while remaining.size:
            pool_arr = np.array(pool)
            lbs_now = np.einsum(
                "pij,kij->pk", chats[remaining], pool_arr, optimize=True
            ).max(axis=1)
            remaining = remaining[lbs_now <= best + TIE_EPS + safety]
            batch, remaining = remaining[:batch_size], remaining[batch_size:]
            for pos in batch:
                map_tuple = tuple(int(v) for v in chunk_arr[pos])
                if map_tuple not in solved:
                    solved.add(map_tuple)
                    solve_map(map_tuple)
            batch_size = min(2 * batch_size, 64)

    lam_min = min(e[1] for e in candidates)
    ties = [e for e in candidates if e[1] <= lam_min + TIE_EPS]
    winner = min(ties, key=lambda e: e[0])
    map_tuple, lam, y, dual, gap, status = winner
    perm = Permutation(map_tuple)
    x_orig = apply_permutation(perm.inverse(), y)
    cert = SdpCertificate(
        lam=lam, X=x_orig, dual_Y=dual, primal_dual_gap=gap, status=status, permutation=perm
    )
    return perm, cert


def _permutation_chunks(n: int):
    """Lexicographic permutations of range(n), yielded in bounded-size blocks."""
    it = itertools.permutations(range(n))
    while True:
        block = list(itertools.islice(it, _CHUNK))
        if not block:
            return
        yield block
