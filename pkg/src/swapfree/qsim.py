"""Exact statevector checks for the quantum side: Ising mapping, Dicke states,
cost and XY-mixer layers, and the idealized constrained optimum.

States are dense complex vectors indexed little-endian: qubit i is bit i of
the basis-state integer. The mixer exponential acts exactly, one Hamming-weight
sector at a time, so weight preservation can be verified to solver-free
precision.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graphs import HardwareGraph

MAX_QUBITS = 14
ENUMERATION_CAP = 5_000_000


@dataclass(frozen=True)
class IsingCoefficients:
    """Two-body couplings J (zero diagonal), fields h, and the scalar offset c0."""

    J: np.ndarray
    h: np.ndarray
    c0: float

    @property
    def n(self) -> int:
        return len(self.h)


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    n: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.n,):
            raise ValueError("amplitude count must be 2^n")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state norm {norm} is not 1")
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class QaoaLayerParams:
    """Angles for the alternating layers; the mixer angle is named beta_angle to
    avoid clashing with the objective's beta weight."""

    gamma: float
    beta_angle: float
    layers: int = 1


def ising_coefficients(c: np.ndarray, strict_paper: bool = False) -> IsingCoefficients:
    """Coefficients of the diagonal Hamiltonian matching x^T C x up to c0.

    The default coefficients satisfy the identity exactly for symmetric C:
    J_ij = C_ij / 4 over ordered pairs, h_i = -C_ii/2 - sum_{j!=i}(C_ij+C_ji)/4,
    c0 = tr(C)/2 + sum_{i!=j} C_ij / 4. strict_paper swaps in the weaker field
    h_i = -C_ii/2 - sum_{j!=i} C_ij/4, which breaks the identity; it exists
    only for side-by-side comparison.
    """
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    if c.shape != (n, n):
        raise ValueError("C must be square")
    if not np.allclose(c, c.T, atol=1e-12, rtol=0.0):
        raise ValueError("C must be symmetric")
    j = c / 4.0
    np.fill_diagonal(j, 0.0)
    diag = np.diag(c).copy()
    off_row = c.sum(axis=1) - diag
    if strict_paper:
        h = -diag / 2.0 - off_row / 4.0
    else:
        h = -diag / 2.0 - off_row / 2.0
    c0 = diag.sum() / 2.0 + off_row.sum() / 4.0
    return IsingCoefficients(J=j, h=h, c0=float(c0))


def _bit_table(n: int) -> np.ndarray:
    states = np.arange(1 << n, dtype=np.int64)
    return ((states[:, None] >> np.arange(n)[None, :]) & 1).astype(float)


def cost_energies(ising: IsingCoefficients) -> np.ndarray:
    """<x|H_C|x> for every basis state, in index order."""
    n = ising.n
    z = 1.0 - 2.0 * _bit_table(n)
    return np.einsum("bi,ij,bj->b", z, ising.J, z) + z @ ising.h


def dicke_state(n: int, k: int) -> StateVector:
    """Uniform superposition over all weight-k basis states."""
    if not (0 <= k <= n):
        raise ValueError("need 0 <= k <= n")
    if n > MAX_QUBITS:
        raise ValueError(f"dense statevectors capped at n={MAX_QUBITS}")
    amps = np.zeros(1 << n, dtype=complex)
    weight = _bit_table(n).sum(axis=1).astype(int)
    sel = weight == k
    amps[sel] = 1.0 / math.sqrt(math.comb(n, k))
    return StateVector(amplitudes=amps, n=n)


def apply_cost_layer(state: StateVector, ising: IsingCoefficients, gamma: float) -> StateVector:
    """Diagonal phase layer exp(-i gamma H_C)."""
    if ising.n != state.n:
        raise ValueError("dimension mismatch")
    phases = np.exp(-1j * gamma * cost_energies(ising))
    return StateVector(amplitudes=state.amplitudes * phases, n=state.n)


@lru_cache(maxsize=64)
def _mixer_sector(graph: HardwareGraph, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(basis indices, eigenvalues, eigenvectors) of the XY mixer on weight-k states."""
    n = graph.n
    basis = np.array(
        [s for s in range(1 << n) if bin(s).count("1") == k], dtype=np.int64
    )
    pos = {int(s): t for t, s in enumerate(basis)}
    dim = len(basis)
    ham = np.zeros((dim, dim))
    for t, s in enumerate(basis):
        s = int(s)
        for i, j in graph.sorted_edges:
            # (X_i X_j + Y_i Y_j)/2 hops one excitation across the edge
            if (s >> i) & 1 and not (s >> j) & 1:
                u = s ^ ((1 << i) | (1 << j))
                ham[t, pos[u]] = 1.0
                ham[pos[u], t] = 1.0
    vals, vecs = np.linalg.eigh(ham)
    return basis, vals, vecs


def apply_xy_mixer_layer(state: StateVector, graph: HardwareGraph, beta_angle: float) -> StateVector:
    """Exact exp(-i beta H_M) with H_M = 1/2 sum_{ij in E} (X_i X_j + Y_i Y_j).

    Applied blockwise per Hamming weight; each sector is invariant.
    """
    if graph.n != state.n:
        raise ValueError("dimension mismatch")
    amps = state.amplitudes.copy()
    for k in range(state.n + 1):
        basis, vals, vecs = _mixer_sector(graph, k)
        sector = amps[basis]
        if not sector.any():
            continue
        amps[basis] = vecs @ (np.exp(-1j * beta_angle * vals) * (vecs.T @ sector))
    return StateVector(amplitudes=amps, n=state.n)


def apply_layers(
    state: StateVector,
    ising: IsingCoefficients,
    graph: HardwareGraph,
    params: list[QaoaLayerParams],
) -> StateVector:
    """Alternating cost and mixer layers applied in sequence."""
    for p in params:
        for _ in range(p.layers):
            state = apply_cost_layer(state, ising, p.gamma)
            state = apply_xy_mixer_layer(state, graph, p.beta_angle)
    return state


def weight_sector_leakage(state: StateVector, k: int) -> float:
    """Probability mass outside the weight-k sector."""
    weight = _bit_table(state.n).sum(axis=1).astype(int)
    outside = weight != k
    return float(np.linalg.norm(state.amplitudes[outside]))


def idealized_qaoa_solve(c: np.ndarray, k: int) -> tuple[np.ndarray, float]:
    """Exact minimum of z^T C z over weight-k binary z; ties resolve to the
    lexicographically smallest bit vector."""
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    if c.shape != (n, n):
        raise ValueError("C must be square")
    if not (0 <= k <= n):
        raise ValueError("need 0 <= k <= n")
    count = math.comb(n, k)
    if count > ENUMERATION_CAP:
        raise ValueError(f"C({n},{k}) = {count} exceeds the enumeration cap")
    if k == 0:
        return np.zeros(n, dtype=int), 0.0
    combos = np.array(list(itertools.combinations(range(n), k)), dtype=np.intp)
    values = c[combos[:, :, None], combos[:, None, :]].sum(axis=(1, 2))
    vmin = values.min()
    best_bits = None
    for idx in np.flatnonzero(values == vmin):
        bits = np.zeros(n, dtype=int)
        bits[combos[idx]] = 1
        t = tuple(bits)
        if best_bits is None or t < best_bits:
            best_bits = t
    return np.array(best_bits, dtype=int), float(vmin)
