"""Similarity and problem matrices for the cardinality-constrained selection objective."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .rng import SplitMix64, derive_seed

SIMILARITY_CAP = 1.0 - math.exp(-2.0)  # correlation -1 maps here


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric m x m dissimilarity matrix with zero diagonal, entries in [0, 1-e^-2]."""

    values: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("similarity matrix must be square")
        if not np.allclose(v, v.T, atol=1e-12, rtol=0.0):
            raise ValueError("similarity matrix must be symmetric")
        if np.abs(np.diag(v)).max() > 1e-12:
            raise ValueError("similarity diagonal must be zero")
        if v.min() < -1e-12 or v.max() > SIMILARITY_CAP + 1e-12:
            raise ValueError("similarity entries out of range")
        object.__setattr__(self, "values", v)
        if self.labels and len(self.labels) != v.shape[0]:
            raise ValueError("label count does not match matrix size")

    @property
    def m(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class ProblemMatrix:
    """Padded n x n objective matrix: beta*Diag(C 1) - (alpha/2) C on the asset block."""

    chat: np.ndarray
    alpha: float
    beta: float
    k: int
    source: SimilarityMatrix

    @property
    def n(self) -> int:
        return self.chat.shape[0]

    @property
    def m(self) -> int:
        return self.source.m


def similarity_from_correlation(corr: np.ndarray, labels=()) -> SimilarityMatrix:
    """C[i,j] = 1 - exp(-(1 - Corr[i,j])); monotone decreasing in correlation."""
    corr = np.asarray(corr, dtype=float)
    if corr.ndim != 2 or corr.shape[0] != corr.shape[1]:
        raise ValueError("correlation matrix must be square")
    if not np.allclose(corr, corr.T, atol=1e-10, rtol=0.0):
        raise ValueError("correlation matrix must be symmetric")
    if np.abs(np.diag(corr) - 1.0).max() > 1e-10:
        raise ValueError("correlation diagonal must be 1")
    if corr.min() < -1.0 - 1e-10 or corr.max() > 1.0 + 1e-10:
        raise ValueError("correlation entries must lie in [-1, 1]")
    corr = np.clip((corr + corr.T) / 2.0, -1.0, 1.0)
    c = 1.0 - np.exp(-(1.0 - corr))
    np.fill_diagonal(c, 0.0)
    return SimilarityMatrix(values=c, labels=tuple(labels))


def correlation_from_returns(returns: np.ndarray) -> np.ndarray:
    """Pearson correlation of per-asset return rows; entries clamped to [-1, 1]."""
    r = np.asarray(returns, dtype=float)
    if r.ndim != 2 or r.shape[1] < 2:
        raise ValueError("need an m x T returns matrix with T >= 2")
    centered = r - r.mean(axis=1, keepdims=True)
    norms = np.sqrt((centered ** 2).sum(axis=1))
    for i, s in enumerate(norms):
        if s == 0.0:
            raise ValueError(f"asset row {i} has zero variance")
    corr = (centered @ centered.T) / np.outer(norms, norms)
    corr = np.clip((corr + corr.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return corr


def build_problem_matrix(
    sim: SimilarityMatrix, alpha: float, beta: float, k: int, n_qubits: int
) -> ProblemMatrix:
    """Embed the m x m objective block into an n x n matrix, padding with zeros."""
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if n_qubits < sim.m:
        raise ValueError("n_qubits must be at least the asset count")
    if not (1 <= k <= n_qubits):
        raise ValueError("k must satisfy 1 <= k <= n_qubits")
    c = sim.values
    block = beta * np.diag(c.sum(axis=1)) - (alpha / 2.0) * c
    chat = np.zeros((n_qubits, n_qubits))
    chat[: sim.m, : sim.m] = block
    return ProblemMatrix(chat=chat, alpha=alpha, beta=beta, k=k, source=sim)


def laplacian_part(sim: SimilarityMatrix) -> np.ndarray:
    """L = Diag(C 1) - C: zero row sums, nonpositive off-diagonal, PSD."""
    c = sim.values
    return np.diag(c.sum(axis=1)) - c


def synthetic_correlation(m: int, seed: int, factors: int = 3, epsilon: float = 0.1) -> np.ndarray:
    """Random factor-model correlation: normalize(F F^T + eps*I) to unit diagonal."""
    if m < 1:
        raise ValueError("need at least one asset")
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    rng = SplitMix64(derive_seed(seed, m, factors))
    f = np.array([[rng.normal() for _ in range(factors)] for _ in range(m)])
    cov = f @ f.T + epsilon * np.eye(m)
    d = np.sqrt(np.diag(cov))
    corr = cov / np.outer(d, d)
    corr = np.clip((corr + corr.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return corr


def load_correlation_csv(text: str) -> tuple[np.ndarray, tuple[str, ...]]:
    """Correlation CSV: header row of asset labels, then an m x m block of floats."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in r)]
    if not rows:
        raise ValueError("empty correlation CSV")
    labels = tuple(cell.strip() for cell in rows[0])
    m = len(labels)
    if len(rows) - 1 != m:
        raise ValueError(f"expected {m} data rows, found {len(rows) - 1}")
    data = np.array([[float(cell) for cell in row] for row in rows[1:]])
    if data.shape != (m, m):
        raise ValueError("correlation block is not square")
    return data, labels


def load_returns_csv(text: str) -> tuple[np.ndarray, tuple[str, ...]]:
    """Returns CSV: one row per asset, first column a label, then per-period returns."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in r)]
    if not rows:
        raise ValueError("empty returns CSV")
    labels = tuple(row[0].strip() for row in rows)
    data = np.array([[float(cell) for cell in row[1:]] for row in rows])
    return data, labels
