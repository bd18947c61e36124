"""Evaluation harness: gap metrics, SWAP routing, noise baseline, and sweeps."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bruteforce import BRUTE_FORCE_CAP, brute_force_permutations
from .graphs import HardwareGraph, connected_graph_with_edges, density_edge_count
from .permutations import Permutation, apply_permutation
from .placement import ALL_HEURISTICS, Heuristic, HeuristicKind, run_heuristic
from .qsim import ENUMERATION_CAP, idealized_qaoa_solve
from .rng import SplitMix64, derive_seed
from .sdp import _as_matrix
from .similarity import (
    build_problem_matrix,
    load_correlation_csv,
    similarity_from_correlation,
    synthetic_correlation,
)

DEFAULT_CNOT_ERROR_RATE = 0.0033
BRUTE_FORCE_NAME = "brute-force"

CSV_COLUMNS = (
    "instance_id,n,density,k,heuristic,lambda,lambda_norm,opt_gap,"
    "swaps,p,baseline_value,status,wall_ms"
).split(",")


def error_probability(cnot_error_rate: float, swap_count: int) -> float:
    """p = 1 - (1 - rate)^(3 * swaps): each SWAP costs three CNOTs."""
    if not (0.0 <= cnot_error_rate < 1.0):
        raise ValueError("CNOT error rate must lie in [0, 1)")
    if swap_count < 0:
        raise ValueError("swap count must be nonnegative")
    return 1.0 - (1.0 - cnot_error_rate) ** (3 * swap_count)


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing-channel strength induced by SWAP overhead."""

    cnot_error_rate: float = DEFAULT_CNOT_ERROR_RATE
    swap_count: int = 0

    @property
    def p(self) -> float:
        return error_probability(self.cnot_error_rate, self.swap_count)


def baseline_expected_value(chat, k: int, noise: NoiseModel, optimum: float) -> float:
    """Expected objective of the depolarized ideal solver:
    (1-p) * optimum + (p/4) * (tr(Chat) + sum(Chat))."""
    c = _as_matrix(chat)
    p = noise.p
    return (1.0 - p) * optimum + (p / 4.0) * (float(np.trace(c)) + float(c.sum()))


def optimality_gap(algorithm_value: float, optimal_value: float) -> float:
    """(algorithm - optimal) / |optimal|; undefined at a zero optimum."""
    if abs(optimal_value) <= 1e-12:
        raise ValueError("gap undefined at zero optimum")
    return (algorithm_value - optimal_value) / abs(optimal_value)


def top_pool_value(x: np.ndarray, chat, k: int) -> float:
    """Best original-objective value among the top 1% of weight-k selections
    ranked on the approximant (ties by lexicographic bit vector)."""
    x = np.asarray(x, dtype=float)
    c = _as_matrix(chat)
    n = c.shape[0]
    count = math.comb(n, k)
    if count > ENUMERATION_CAP:
        raise ValueError(f"C({n},{k}) = {count} exceeds the enumeration cap")
    combos = np.array(list(itertools.combinations(range(n), k)), dtype=np.intp)
    vx = x[combos[:, :, None], combos[:, None, :]].sum(axis=(1, 2))
    order = np.argsort(vx, kind="stable")
    order = _reorder_ties_lex(order, vx, combos, n)
    pool_size = max(1, math.ceil(0.01 * count))
    pool = combos[order[:pool_size]]
    vc = c[pool[:, :, None], pool[:, None, :]].sum(axis=(1, 2))
    return float(vc.min())


def _reorder_ties_lex(order: np.ndarray, values: np.ndarray, combos: np.ndarray, n: int) -> np.ndarray:
    """Within runs of equal values, sort by the lexicographic bit vector."""
    out = order.copy()
    start = 0
    while start < len(out):
        end = start + 1
        while end < len(out) and values[out[end]] == values[out[start]]:
            end += 1
        if end - start > 1:
            def bit_key(idx):
                bits = np.zeros(n, dtype=int)
                bits[combos[idx]] = 1
                return tuple(bits)

            out[start:end] = sorted(out[start:end], key=bit_key)
        start = end
    return out


def _lex_shortest_path(graph: HardwareGraph, src: int, dst: int) -> list[int]:
    """Shortest path choosing the smallest-index next vertex at every hop."""
    dist_to_dst = graph.bfs_distances(dst)
    if dist_to_dst[src] < 0:
        raise ValueError(f"no path between {src} and {dst}")
    path = [src]
    cur = src
    while cur != dst:
        cur = min(w for w in graph.neighbors(cur) if dist_to_dst[w] == dist_to_dst[cur] - 1)
        path.append(cur)
    return path


def estimate_swap_count(chat, graph: HardwareGraph, perm: Permutation) -> int:
    """Deterministic greedy router for one cost layer.

    Interactions are the nonzero off-diagonal pairs of the permuted matrix,
    processed lexicographically; each non-adjacent pair moves its first
    endpoint along the lexicographic shortest path, one SWAP per hop short of
    adjacency, updating the layout as it goes.
    """
    c = _as_matrix(chat)
    n = graph.n
    chat_p = apply_permutation(perm, c)
    interactions = [
        (i, j) for i in range(n) for j in range(i + 1, n) if chat_p[i, j] != 0.0
    ]
    pos = list(range(n))  # slot -> vertex
    occupant = list(range(n))  # vertex -> slot
    total = 0
    for a, b in interactions:
        va, vb = pos[a], pos[b]
        if va == vb:
            continue
        path = _lex_shortest_path(graph, va, vb)
        for w in path[1:-1]:
            u = pos[a]
            su, sw = occupant[u], occupant[w]
            occupant[u], occupant[w] = sw, su
            pos[su], pos[sw] = w, u
            total += 1
    return total


@dataclass(frozen=True)
class ExperimentRecord:
    """One (instance, heuristic) evaluation; CSV columns plus context fields."""

    instance_id: str
    n: int
    density: float
    k: int
    heuristic: str
    lam: float
    lambda_norm: float
    opt_gap: float
    swaps: int
    p: float
    baseline_value: float
    status: str
    wall_ms: int
    optimum: float = math.nan
    algorithm_value: float = math.nan

    def csv_row(self) -> list[str]:
        return [
            self.instance_id,
            str(self.n),
            _fmt(self.density),
            str(self.k),
            self.heuristic,
            _fmt(self.lam),
            _fmt(self.lambda_norm),
            _fmt(self.opt_gap),
            str(self.swaps),
            _fmt(self.p),
            _fmt(self.baseline_value),
            self.status,
            str(self.wall_ms),
        ]


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class SweepConfig:
    """Full description of a sweep; everything needed for byte-reproducible output."""

    n_values: tuple[int, ...]
    densities: tuple[float, ...]
    k: int
    instances: int
    heuristics: tuple[str, ...] = tuple(h.value for h in ALL_HEURISTICS)
    alpha: float = 1.0
    beta: float = 1.0
    seed: int = 0
    samples: int = 10
    data_source: str = "synthetic"
    assets: int | None = None
    assets_offset: int = 0
    brute_force: bool = False
    brute_force_cap: int = BRUTE_FORCE_CAP
    cnot_error_rate: float = DEFAULT_CNOT_ERROR_RATE
    algorithm_value: str = "top_pool"  # or "argmin"
    norm: str = "opnorm"  # or "fro"
    tol: float = 1e-7
    jobs: int = 1
    clamp_to_tree: bool = True
    factors: int = 3
    epsilon: float = 0.1

    def __post_init__(self):
        if not self.n_values or not self.densities:
            raise ValueError("n_values and densities must be nonempty")
        if self.instances < 1 or self.samples < 1 or self.k < 1:
            raise ValueError("counts must be >= 1")
        if self.algorithm_value not in ("top_pool", "argmin"):
            raise ValueError("algorithm_value must be 'top_pool' or 'argmin'")
        if self.norm not in ("opnorm", "fro"):
            raise ValueError("norm must be 'opnorm' or 'fro'")
        known = {h.value for h in ALL_HEURISTICS}
        for name in self.heuristics:
            if name not in known:
                raise ValueError(f"unknown heuristic '{name}'")

    @staticmethod
    def from_dict(d: dict) -> "SweepConfig":
        d = dict(d)
        for key in ("n_values", "densities", "heuristics"):
            if key in d:
                d[key] = tuple(d[key])
        return SweepConfig(**d)

    def asset_count(self, n: int) -> int:
        m = self.assets if self.assets is not None else n - self.assets_offset
        if not (1 <= m <= n):
            raise ValueError(f"asset count {m} infeasible for n={n}")
        return m


def _instance_correlation(config: SweepConfig, m: int, corr_seed: int) -> np.ndarray:
    if config.data_source == "synthetic":
        return synthetic_correlation(m, corr_seed, factors=config.factors, epsilon=config.epsilon)
    with open(config.data_source, "r", encoding="utf-8") as fh:
        corr, _labels = load_correlation_csv(fh.read())
    if corr.shape[0] < m:
        raise ValueError(f"CSV provides {corr.shape[0]} assets, need {m}")
    rng = SplitMix64(derive_seed(corr_seed, 7))
    picks = sorted(rng.permutation(corr.shape[0])[:m])
    return corr[np.ix_(picks, picks)]


def _heuristic_rows(config: SweepConfig) -> list[str]:
    rows = list(config.heuristics)
    if config.brute_force:
        rows.append(BRUTE_FORCE_NAME)
    return rows


def run_instance(config: SweepConfig, n: int, density: float, idx: int) -> list[ExperimentRecord]:
    """Evaluate every configured heuristic (and brute force) on one instance."""
    instance_id = f"n{n}_d{density:g}_i{idx}"
    graph_seed = derive_seed(config.seed, 11, n, idx)
    corr_seed = derive_seed(config.seed, 22, n, idx)

    target = density_edge_count(n, density)
    if config.clamp_to_tree:
        target = max(n - 1, target)
    base_rows = _heuristic_rows(config)
    try:
        graph = connected_graph_with_edges(n, target, graph_seed)
        m = config.asset_count(n)
        corr = _instance_correlation(config, m, corr_seed)
        sim = similarity_from_correlation(corr)
        chat = build_problem_matrix(sim, config.alpha, config.beta, config.k, n)
        denom_matrix = chat.chat
        denom = (
            float(np.abs(np.linalg.eigvalsh(denom_matrix)).max())
            if config.norm == "opnorm"
            else float(np.linalg.norm(denom_matrix))
        )
        _, optimum = idealized_qaoa_solve(chat.chat, config.k)
    except Exception as exc:  # instance-level failure: one error row per heuristic
        return [
            _error_record(instance_id, n, density, config.k, name, str(exc))
            for name in base_rows
        ]

    records = []
    heuristic_perms = []
    for h_index, name in enumerate(base_rows):
        t0 = time.perf_counter()
        try:
            if name == BRUTE_FORCE_NAME:
                if n > config.brute_force_cap:
                    raise ValueError(f"brute force capped at n={config.brute_force_cap}")
                perm, cert = brute_force_permutations(
                    chat, graph, tol=config.tol, seed_perms=tuple(heuristic_perms)
                )
            else:
                kind = HeuristicKind(
                    kind=Heuristic(name),
                    samples=config.samples,
                    seed=derive_seed(config.seed, 33, n, idx, h_index),
                )
                perm, cert = run_heuristic(kind, chat, graph)
                heuristic_perms.append(perm)

            lam = cert.lam
            lambda_norm = lam / denom if denom > 0 else math.nan
            if config.algorithm_value == "top_pool":
                alg_value = top_pool_value(cert.X, chat.chat, config.k)
            else:
                z, _ = idealized_qaoa_solve(cert.X, config.k)
                alg_value = float(z @ chat.chat @ z)
            try:
                gap = optimality_gap(alg_value, optimum)
            except ValueError:
                gap = math.nan
            swaps = estimate_swap_count(chat.chat, graph, perm)
            noise = NoiseModel(cnot_error_rate=config.cnot_error_rate, swap_count=swaps)
            baseline = baseline_expected_value(chat.chat, config.k, noise, optimum)
            wall_ms = int(round((time.perf_counter() - t0) * 1000))
            records.append(
                ExperimentRecord(
                    instance_id=instance_id,
                    n=n,
                    density=density,
                    k=config.k,
                    heuristic=name,
                    lam=lam,
                    lambda_norm=lambda_norm,
                    opt_gap=gap,
                    swaps=swaps,
                    p=noise.p,
                    baseline_value=baseline,
                    status="ok" if cert.status == "optimal" else f"solver:{cert.status}",
                    wall_ms=wall_ms,
                    optimum=optimum,
                    algorithm_value=alg_value,
                )
            )
        except Exception as exc:
            records.append(_error_record(instance_id, n, density, config.k, name, str(exc)))
    return records


def _error_record(
    instance_id: str, n: int, density: float, k: int, heuristic: str, message: str
) -> ExperimentRecord:
    return ExperimentRecord(
        instance_id=instance_id,
        n=n,
        density=density,
        k=k,
        heuristic=heuristic,
        lam=math.nan,
        lambda_norm=math.nan,
        opt_gap=math.nan,
        swaps=0,
        p=math.nan,
        baseline_value=math.nan,
        status=f"error:{message}"[:200].replace(",", ";").replace("\n", " "),
        wall_ms=0,
    )


def _instance_args(config: SweepConfig):
    for n in config.n_values:
        for density in config.densities:
            for idx in range(config.instances):
                yield n, density, idx


def run_sweep(
    config: SweepConfig,
    csv_path: str | None = None,
    summary_path: str | None = None,
    progress=None,
) -> list[ExperimentRecord]:
    """Run all instances, streaming rows to CSV in deterministic order.

    Instances are independent; with jobs > 1 they evaluate in a process pool
    and results merge back in submission order, so output is identical to a
    sequential run.
    """
    args = list(_instance_args(config))
    sink = open(csv_path, "w", encoding="utf-8", newline="") if csv_path else None
    writer = None
    if sink is not None:
        writer = csv.writer(sink)
        writer.writerow(CSV_COLUMNS)
        sink.flush()

    records: list[ExperimentRecord] = []
    try:
        if config.jobs > 1:
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                batches = pool.map(
                    _run_instance_star, ((config, n, d, i) for n, d, i in args)
                )
                for batch in batches:
                    _emit(batch, records, writer, sink, progress)
        else:
            for n, density, idx in args:
                _emit(run_instance(config, n, density, idx), records, writer, sink, progress)
    finally:
        if sink is not None:
            sink.close()

    if summary_path is not None:
        with open(summary_path, "w", encoding="utf-8") as fh:
            fh.write(summarize_records(records))
    return records


def _emit(batch, records, writer, sink, progress):
    records.extend(batch)
    if writer is not None:
        for rec in batch:
            writer.writerow(rec.csv_row())
        sink.flush()
    if progress is not None and batch:
        progress(batch[0].instance_id)


def _run_instance_star(args):
    return run_instance(*args)


def records_to_csv(records: list[ExperimentRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(rec.csv_row())
    return buf.getvalue()


def summarize_records(records: list[ExperimentRecord]) -> str:
    """Per-(n, density, heuristic) means over clean rows, as JSON for plotting."""
    cells: dict[tuple, list[ExperimentRecord]] = {}
    for rec in records:
        if not rec.status.startswith("error"):
            cells.setdefault((rec.n, rec.density, rec.heuristic), []).append(rec)
    out = []
    for (n, density, heuristic), recs in sorted(cells.items(), key=lambda kv: (
        kv[0][0], kv[0][1], kv[0][2]
    )):
        def mean(getter):
            vals = [getter(r) for r in recs if not math.isnan(getter(r))]
            return sum(vals) / len(vals) if vals else None

        baseline_gaps = [
            (r.baseline_value - r.optimum) / abs(r.optimum)
            for r in recs
            if not math.isnan(r.baseline_value)
            and not math.isnan(r.optimum)
            and abs(r.optimum) > 1e-12
        ]
        out.append(
            {
                "n": n,
                "density": density,
                "heuristic": heuristic,
                "count": len(recs),
                "mean_lambda_norm": mean(lambda r: r.lambda_norm),
                "mean_opt_gap": mean(lambda r: r.opt_gap),
                "mean_swaps": mean(lambda r: float(r.swaps)),
                "mean_p": mean(lambda r: r.p),
                "mean_baseline_value": mean(lambda r: r.baseline_value),
                "mean_baseline_gap": (
                    sum(baseline_gaps) / len(baseline_gaps) if baseline_gaps else None
                ),
            }
        )
    return json.dumps({"cells": out}, indent=2)
