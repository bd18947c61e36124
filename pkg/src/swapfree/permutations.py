"""Permutations mapping physical qubits to problem indices, and their matrix action."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Permutation:
    """Bijection on {0..n-1}; map[v] is the problem index assigned to vertex v."""

    map: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.map) != list(range(len(self.map))):
            raise ValueError("permutation map is not a bijection on 0..n-1")

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(n)))

    @staticmethod
    def from_sequence(seq) -> "Permutation":
        return Permutation(tuple(int(x) for x in seq))

    @property
    def n(self) -> int:
        return len(self.map)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.map):
            inv[v] = i
        return Permutation(tuple(inv))

    def matrix(self) -> np.ndarray:
        """0/1 matrix P with P[map[v], v] = 1; then (P^T M P)[i,j] = M[map[i], map[j]]."""
        p = np.zeros((self.n, self.n))
        for v, idx in enumerate(self.map):
            p[idx, v] = 1.0
        return p

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self . other)(v) = self(other(v))."""
        return Permutation(tuple(self.map[other.map[v]] for v in range(self.n)))


def apply_permutation(p: Permutation, m: np.ndarray) -> np.ndarray:
    """Return P^T M P, i.e. out[i, j] = M[p(i), p(j)]."""
    m = np.asarray(m, dtype=float)
    if m.shape != (p.n, p.n):
        raise ValueError(f"matrix shape {m.shape} does not match permutation size {p.n}")
    idx = np.asarray(p.map, dtype=np.intp)
    return m[np.ix_(idx, idx)]
