"""Command-line entry point: instance solves, heuristic comparison, sweeps, checks.

Exit codes: 0 ok, 1 property violation, 2 usage error, 3 solver failure.
"""

from __future__ import annotations

import math
import sys

import click
import numpy as np

from . import __version__
from .bench import (
    BRUTE_FORCE_NAME,
    NoiseModel,
    SweepConfig,
    baseline_expected_value,
    estimate_swap_count,
    optimality_gap,
    run_sweep,
    top_pool_value,
)
from .bruteforce import BRUTE_FORCE_CAP, brute_force_permutations
from .graphs import HardwareGraph, graph_from_text, graph_to_text, random_connected_graph
from .permutations import Permutation
from .placement import ALL_HEURISTICS, Heuristic, HeuristicKind, run_heuristic
from .qsim import (
    ENUMERATION_CAP,
    apply_cost_layer,
    apply_xy_mixer_layer,
    cost_energies,
    dicke_state,
    idealized_qaoa_solve,
    ising_coefficients,
    weight_sector_leakage,
    StateVector,
)
from .rng import SplitMix64, derive_seed
from .sdp import solve_fixed_p_sdp
from .similarity import (
    build_problem_matrix,
    correlation_from_returns,
    load_correlation_csv,
    load_returns_csv,
    similarity_from_correlation,
    synthetic_correlation,
)

HEURISTIC_NAMES = tuple(h.value for h in ALL_HEURISTICS)


@click.group()
@click.version_option(version=__version__, prog_name="swapfree", message="%(prog)s %(version)s")
def main():
    """Hardware-compatible cost-matrix approximation for SWAP-free QAOA layers."""


def instance_options(fn):
    fn = click.option("--graph", "graph_path", type=click.Path(exists=False), default=None,
                      help="Graph text file ('n m' header plus edge lines).")(fn)
    fn = click.option("--complete", "complete_n", type=int, default=None,
                      help="Use the complete graph on N vertices.")(fn)
    fn = click.option("--n", "n_vertices", type=int, default=None, help="Vertices for a random graph.")(fn)
    fn = click.option("--density", type=float, default=0.5, show_default=True)(fn)
    fn = click.option("--graph-seed", type=int, default=0, show_default=True)(fn)
    fn = click.option("--data", "data_path", type=click.Path(exists=False), default=None,
                      help="CSV input; see --data-mode.")(fn)
    fn = click.option("--data-mode", type=click.Choice(["correlation", "returns"]),
                      default="correlation", show_default=True)(fn)
    fn = click.option("--assets", type=int, default=None,
                      help="Synthetic asset count (defaults to the vertex count).")(fn)
    fn = click.option("--data-seed", type=int, default=0, show_default=True)(fn)
    fn = click.option("--alpha", type=float, default=1.0, show_default=True)(fn)
    fn = click.option("--beta", type=float, default=1.0, show_default=True)(fn)
    fn = click.option("-k", "--k", type=int, default=2, show_default=True)(fn)
    return fn


def _build_graph(graph_path, complete_n, n_vertices, density, graph_seed) -> HardwareGraph:
    chosen = sum(x is not None for x in (graph_path, complete_n, n_vertices))
    if chosen != 1:
        raise click.UsageError("choose exactly one of --graph, --complete, or --n/--density")
    if graph_path is not None:
        try:
            with open(graph_path, "r", encoding="utf-8") as fh:
                return graph_from_text(fh.read())
        except (OSError, ValueError) as exc:
            raise click.UsageError(f"cannot read graph file: {exc}")
    if complete_n is not None:
        return HardwareGraph.complete(complete_n)
    try:
        return random_connected_graph(n_vertices, density, graph_seed)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _build_problem(graph, data_path, data_mode, assets, data_seed, alpha, beta, k):
    try:
        if data_path is not None:
            try:
                with open(data_path, "r", encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise click.UsageError(f"cannot read data file: {exc}")
            if data_mode == "correlation":
                corr, labels = load_correlation_csv(text)
            else:
                returns, labels = load_returns_csv(text)
                corr = correlation_from_returns(returns)
            sim = similarity_from_correlation(corr, labels)
        else:
            m = assets if assets is not None else graph.n
            corr = synthetic_correlation(m, data_seed)
            sim = similarity_from_correlation(corr)
        return build_problem_matrix(sim, alpha, beta, k, graph.n)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _report_instance(cert, chat, k, show_gap=True):
    denom = float(np.abs(np.linalg.eigvalsh(chat.chat)).max())
    lam_norm = cert.lam / denom if denom > 0 else math.nan
    click.echo(f"lambda          {cert.lam:.10g}")
    click.echo(f"lambda_norm     {lam_norm:.10g}")
    click.echo(f"gap             {cert.primal_dual_gap:.3g}")
    click.echo(f"status          {cert.status}")
    if show_gap and math.comb(chat.n, k) <= ENUMERATION_CAP:
        _, optimum = idealized_qaoa_solve(chat.chat, k)
        value = top_pool_value(cert.X, chat.chat, k)
        try:
            gap = optimality_gap(value, optimum)
            click.echo(f"opt_gap         {gap:.10g}   (top-1% pool vs exhaustive optimum)")
        except ValueError:
            click.echo("opt_gap         undefined (zero optimum)")


@main.command("gen-graph")
@click.option("--n", "n_vertices", type=int, required=True)
@click.option("--density", type=float, default=0.5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="Output path (stdout if omitted).")
def gen_graph(n_vertices, density, seed, out):
    """Generate a random connected hardware graph and print its text form."""
    try:
        g = random_connected_graph(n_vertices, density, seed)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    text = graph_to_text(g)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@main.command()
@instance_options
@click.option("--heuristic", type=click.Choice(HEURISTIC_NAMES + ("identity",)),
              default="perron-conn", show_default=True)
@click.option("--samples", type=int, default=10, show_default=True,
              help="Samples for random heuristics.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=1e-7, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="Certificate JSON path.")
def solve(graph_path, complete_n, n_vertices, density, graph_seed, data_path, data_mode,
          assets, data_seed, alpha, beta, k, heuristic, samples, seed, tol, out):
    """Solve one instance with a chosen placement heuristic."""
    graph = _build_graph(graph_path, complete_n, n_vertices, density, graph_seed)
    chat = _build_problem(graph, data_path, data_mode, assets, data_seed, alpha, beta, k)
    if heuristic == "identity":
        perm = Permutation.identity(graph.n)
        cert = solve_fixed_p_sdp(chat, graph, perm, tol)
    else:
        kind = HeuristicKind(kind=Heuristic(heuristic), samples=samples, seed=seed)
        perm, cert = run_heuristic(kind, chat, graph,
                                   solve=lambda c, g, p: solve_fixed_p_sdp(c, g, p, tol))
    click.echo(f"heuristic       {heuristic}")
    click.echo(f"placement       {list(perm.map)}")
    _report_instance(cert, chat, k)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(cert.to_json())
        click.echo(f"certificate written to {out}")
    if cert.status != "optimal":
        sys.exit(3)


@main.command()
@instance_options
@click.option("--samples", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=1e-7, show_default=True)
@click.option("--with-brute-force", is_flag=True, help="Append the exhaustive benchmark row.")
def heuristics(graph_path, complete_n, n_vertices, density, graph_seed, data_path, data_mode,
               assets, data_seed, alpha, beta, k, samples, seed, tol, with_brute_force):
    """Compare all seven placement heuristics on one instance."""
    graph = _build_graph(graph_path, complete_n, n_vertices, density, graph_seed)
    chat = _build_problem(graph, data_path, data_mode, assets, data_seed, alpha, beta, k)
    denom = float(np.abs(np.linalg.eigvalsh(chat.chat)).max())
    failed = False
    click.echo(f"{'heuristic':<14}{'lambda':>14}{'lambda_norm':>14}{'status':>10}")
    rows = [(h.value, HeuristicKind(kind=h, samples=samples,
                                    seed=derive_seed(seed, i))) for i, h in enumerate(ALL_HEURISTICS)]
    for name, kind in rows:
        perm, cert = run_heuristic(kind, chat, graph,
                                   solve=lambda c, g, p: solve_fixed_p_sdp(c, g, p, tol))
        failed |= cert.status != "optimal"
        norm = cert.lam / denom if denom > 0 else math.nan
        click.echo(f"{name:<14}{cert.lam:>14.8f}{norm:>14.8f}{cert.status:>10}")
    if with_brute_force:
        if graph.n > BRUTE_FORCE_CAP:
            raise click.UsageError(f"brute force capped at n={BRUTE_FORCE_CAP}")
        perm, cert = brute_force_permutations(chat, graph, tol=tol)
        norm = cert.lam / denom if denom > 0 else math.nan
        click.echo(f"{BRUTE_FORCE_NAME:<14}{cert.lam:>14.8f}{norm:>14.8f}{cert.status:>10}")
    if failed:
        sys.exit(3)


@main.command("brute-force")
@instance_options
@click.option("--tol", type=float, default=1e-7, show_default=True)
@click.option("--force", is_flag=True, help=f"Override the n={BRUTE_FORCE_CAP} cap.")
@click.option("--out", type=click.Path(), default=None, help="Certificate JSON path.")
def brute_force_cmd(graph_path, complete_n, n_vertices, density, graph_seed, data_path,
                    data_mode, assets, data_seed, alpha, beta, k, tol, force, out):
    """Exhaustive minimum-lambda placement (n! SDP solves)."""
    graph = _build_graph(graph_path, complete_n, n_vertices, density, graph_seed)
    if graph.n > BRUTE_FORCE_CAP and not force:
        raise click.UsageError(
            f"n={graph.n} exceeds the brute-force cap of {BRUTE_FORCE_CAP}; pass --force to override"
        )
    chat = _build_problem(graph, data_path, data_mode, assets, data_seed, alpha, beta, k)
    perm, cert = brute_force_permutations(chat, graph, tol=tol, force=force)
    click.echo(f"placement       {list(perm.map)}")
    _report_instance(cert, chat, k)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(cert.to_json())
    if cert.status != "optimal":
        sys.exit(3)


@main.command()
@instance_options
@click.option("--heuristic", type=click.Choice(HEURISTIC_NAMES), default="perron-conn",
              show_default=True)
@click.option("--samples", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--rate", type=float, default=0.0033, show_default=True, help="CNOT error rate.")
def baseline(graph_path, complete_n, n_vertices, density, graph_seed, data_path, data_mode,
             assets, data_seed, alpha, beta, k, heuristic, samples, seed, rate):
    """SWAP-noise baseline: route the exact objective, report the depolarized value."""
    graph = _build_graph(graph_path, complete_n, n_vertices, density, graph_seed)
    chat = _build_problem(graph, data_path, data_mode, assets, data_seed, alpha, beta, k)
    kind = HeuristicKind(kind=Heuristic(heuristic), samples=samples, seed=seed)
    perm, cert = run_heuristic(kind, chat, graph)
    zstar, optimum = idealized_qaoa_solve(chat.chat, k)
    swaps = estimate_swap_count(chat.chat, graph, perm)
    noise = NoiseModel(cnot_error_rate=rate, swap_count=swaps)
    value = baseline_expected_value(chat.chat, k, noise, optimum)
    ztilde, _ = idealized_qaoa_solve(cert.X, k)
    heuristic_value = float(ztilde @ chat.chat @ ztilde)
    click.echo(f"optimum             {optimum:.10g}")
    click.echo(f"swap_count          {swaps}")
    click.echo(f"p                   {noise.p:.10g}")
    click.echo(f"baseline_value      {value:.10g}")
    click.echo(f"heuristic_value     {heuristic_value:.10g}")
    for label, v in (("baseline", value), ("heuristic", heuristic_value)):
        try:
            click.echo(f"{label + '_gap':<20}{optimality_gap(v, optimum):.10g}")
        except ValueError:
            click.echo(f"{label}_gap          undefined (zero optimum)")


@main.command()
@click.option("--config", "config_path", type=click.Path(), required=True,
              help="TOML sweep configuration.")
@click.option("--out", type=click.Path(), default="sweep.csv", show_default=True)
@click.option("--summary", type=click.Path(), default=None, help="Summary JSON path.")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--jobs", type=int, default=None,
              help="Worker processes (default: config value, else all cores).")
def sweep(config_path, out, summary, seed, jobs):
    """Run a full experiment sweep from a TOML config; stream rows to CSV."""
    import os

    try:
        import tomllib  # Python >= 3.11
    except ModuleNotFoundError:
        import tomli as tomllib
    try:
        with open(config_path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise click.UsageError(f"cannot read config: {exc}")
    except tomllib.TOMLDecodeError as exc:
        raise click.UsageError(f"bad TOML: {exc}")
    if seed is not None:
        raw["seed"] = seed
    if jobs is not None:
        raw["jobs"] = jobs
    elif "jobs" not in raw:
        raw["jobs"] = os.cpu_count() or 1
    try:
        config = SweepConfig.from_dict(raw)
    except (TypeError, ValueError) as exc:
        raise click.UsageError(f"bad config: {exc}")
    if config.data_source != "synthetic":
        try:
            open(config.data_source, "r").close()
        except OSError as exc:
            raise click.UsageError(f"cannot read data source: {exc}")

    def progress(instance_id):
        click.echo(f"done {instance_id}", err=True)

    records = run_sweep(config, csv_path=out, summary_path=summary, progress=progress)
    errors = sum(1 for r in records if r.status.startswith("error"))
    click.echo(f"{len(records)} records -> {out}" + (f" ({errors} errors)" if errors else ""))


@main.command()
@click.option("--n", "n_qubits", type=int, default=6, show_default=True)
@click.option("-k", "--k", type=int, default=2, show_default=True)
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def qcheck(n_qubits, k, trials, seed):
    """Verify the quantum-side identities at statevector scale."""
    n = n_qubits
    if n < 2 or n > 14:
        raise click.UsageError("need 2 <= n <= 14")
    if not (0 <= k <= n):
        raise click.UsageError("need 0 <= k <= n")
    if trials < 1:
        raise click.UsageError("need trials >= 1")

    # diagonal identity: x^T C x == <x|H_C|x> + c0 for every basis state
    rng = SplitMix64(derive_seed(seed, 1))
    c = np.array([[rng.normal() for _ in range(n)] for _ in range(n)])
    c = (c + c.T) / 2.0
    ising = ising_coefficients(c)
    energies = cost_energies(ising)
    bits = ((np.arange(1 << n)[:, None] >> np.arange(n)[None, :]) & 1).astype(float)
    quad = np.einsum("bi,ij,bj->b", bits, c, bits)
    residual = float(np.abs(quad - energies - ising.c0).max())
    click.echo(f"diagonal identity residual   {residual:.3e}")

    # Dicke state amplitudes
    state = dicke_state(n, k)
    expected = 1.0 / math.sqrt(math.comb(n, k))
    weights = bits.sum(axis=1).astype(int)
    amp_err = float(np.abs(np.abs(state.amplitudes[weights == k]) - expected).max())
    off_mass = float(np.linalg.norm(state.amplitudes[weights != k]))
    click.echo(f"dicke amplitude error        {amp_err:.3e}")

    # weight-sector leakage across random layer applications
    max_leak = 0.0
    max_norm_drift = 0.0
    for t in range(trials):
        trial_rng = SplitMix64(derive_seed(seed, 2, t))
        g = random_connected_graph(n, 0.5, derive_seed(seed, 3, t)) if n >= 3 else HardwareGraph.complete(n)
        amps = np.zeros(1 << n, dtype=complex)
        sector = np.flatnonzero(weights == k)
        re = np.array([trial_rng.normal() for _ in sector])
        im = np.array([trial_rng.normal() for _ in sector])
        vec = re + 1j * im
        amps[sector] = vec / np.linalg.norm(vec)
        psi = StateVector(amplitudes=amps, n=n)
        gamma = 2.0 * math.pi * trial_rng.uniform()
        beta_angle = 2.0 * math.pi * trial_rng.uniform()
        psi = apply_cost_layer(psi, ising, gamma)
        psi = apply_xy_mixer_layer(psi, g, beta_angle)
        max_leak = max(max_leak, weight_sector_leakage(psi, k))
        max_norm_drift = max(max_norm_drift, abs(float(np.linalg.norm(psi.amplitudes)) - 1.0))
    click.echo(f"max weight-sector leakage    {max_leak:.3e}")
    click.echo(f"max norm drift               {max_norm_drift:.3e}")

    # analytic two-qubit hop: XY layer at pi/2 maps |01> to -i|10>
    psi01 = np.zeros(4, dtype=complex)
    psi01[1] = 1.0
    hop = apply_xy_mixer_layer(StateVector(psi01, 2), HardwareGraph.complete(2), math.pi / 2)
    hop_err = float(np.abs(hop.amplitudes - np.array([0, 0, -1j, 0])).max())
    click.echo(f"two-qubit analytic error     {hop_err:.3e}")

    ok = (
        residual <= 1e-12
        and amp_err <= 1e-12
        and off_mass <= 1e-12
        and max_leak <= 1e-10
        and max_norm_drift <= 1e-12
        and hop_err <= 1e-10
    )
    click.echo("PASS" if ok else "FAIL")
    if not ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
