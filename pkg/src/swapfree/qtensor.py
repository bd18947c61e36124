"""Linearization tensor q[k,i,l,j] standing in for products P[k,i] * P[l,j].

A permutation matrix is exactly recovered when q meets six conditions:
(i)/(ii) the diagonal slice q[k,i,k,i] has unit row and column sums,
(iii)/(iv) McCormick envelopes tie every entry to its diagonal slice values,
(v) box bounds, (vi) integrality of the diagonal slice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .permutations import Permutation

MAX_SIZE = 12  # q is n^4 floats


@dataclass(frozen=True)
class QTensor:
    q: np.ndarray  # shape (n, n, n, n), axes (k, i, l, j)

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.ndim != 4 or len(set(q.shape)) != 1:
            raise ValueError("q must be an n^4 tensor")
        if q.shape[0] > MAX_SIZE:
            raise ValueError(f"q tensor capped at n={MAX_SIZE}")
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.q.shape[0]

    def apply(self, m: np.ndarray) -> np.ndarray:
        """q(M)[i, j] = sum_{k,l} q[k,i,l,j] * M[k,l]."""
        m = np.asarray(m, dtype=float)
        if m.shape != (self.n, self.n):
            raise ValueError("matrix size does not match tensor")
        return np.einsum("kilj,kl->ij", self.q, m)


def qtensor_from_permutation(perm: Permutation) -> QTensor:
    p = perm.matrix()
    return QTensor(q=np.einsum("ki,lj->kilj", p, p))


def validate_qtensor(tensor: QTensor, tol: float = 1e-9) -> list[str]:
    """Return the identifiers of violated conditions, empty when q encodes a permutation."""
    q = tensor.q
    n = tensor.n
    diag = np.einsum("kiki->ki", q)  # d[k,i] stands for P[k,i]
    violations = []
    if np.abs(diag.sum(axis=0) - 1.0).max() > tol:
        violations.append("i")
    if np.abs(diag.sum(axis=1) - 1.0).max() > tol:
        violations.append("ii")
    upper = np.minimum(diag[:, :, None, None], diag[None, None, :, :])
    if (q - upper).max() > tol:
        violations.append("iii")
    lower = diag[:, :, None, None] + diag[None, None, :, :] - 1.0
    if (lower - q).max() > tol:
        violations.append("iv")
    if q.min() < -tol or q.max() > 1.0 + tol:
        violations.append("v")
    if np.minimum(np.abs(diag), np.abs(diag - 1.0)).max() > tol:
        violations.append("vi")
    return violations
