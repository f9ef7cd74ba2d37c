"""Configuration-driven experiment runner.

Subcommands: ``compile`` (Hamiltonian to circuit JSON), ``quench``
(entropy / mutual-information time series against quasi-particle
predictions), ``lightcone`` (I2 grids over a coupling-exponent sweep plus
front classification), and ``verify`` (oracle and invariant suites).
Experiments are described by a single JSON config, either a file passed
with --config or a shipped preset named with --preset. Exit codes: 0
success, 1 numeric failure, 2 config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.linalg import expm

from . import compiler, engine, lightcone, models, predict
from .sympcore import symplectic_form

SCHEMA_HEADER = "# ota-sim schema v1"


class ConfigError(ValueError):
    """The experiment description is malformed or inconsistent."""


# ---------------------------------------------------------------- config


def _load_config(args) -> dict:
    if bool(args.config) == bool(args.preset):
        raise ConfigError("pass exactly one of --config PATH or --preset NAME")
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        text = path.read_text()
    else:
        ref = resources.files("otasim") / "presets" / f"{args.preset}.json"
        if not ref.is_file():
            names = sorted(
                p.name.removesuffix(".json")
                for p in (resources.files("otasim") / "presets").iterdir()
            )
            raise ConfigError(f"unknown preset {args.preset!r}; shipped: {names}")
        text = ref.read_text()
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    _validate_config(config)
    return config


def _validate_config(config: dict) -> None:
    theory = config.get("theory")
    if not isinstance(theory, dict) or "tag" not in theory:
        raise ConfigError("config needs a theory section with a tag")
    tag = theory["tag"]
    if tag not in {"relativistic", "fractional", "nonrelativistic", "curved", "prequench"}:
        raise ConfigError(f"unknown theory tag {tag!r}")
    Ns = theory.get("N")
    Ns = Ns if isinstance(Ns, list) else [Ns]
    if not Ns or any(not isinstance(n, int) or n < 2 for n in Ns):
        raise ConfigError("theory.N must be an integer >= 2 or a list of them")
    eps = theory.get("epsilon")
    if eps is None and "L" in theory:
        if len(Ns) > 1:
            raise ConfigError("theory.L with an N sweep is ambiguous; give epsilon")
        eps = theory["L"] / Ns[0]
        theory["epsilon"] = eps
    if not eps or eps <= 0:
        raise ConfigError("theory.epsilon (or L) must be positive")
    if "L" in theory and len(Ns) == 1 and abs(theory["L"] - Ns[0] * eps) > 1e-9:
        raise ConfigError(
            f"inconsistent geometry: L={theory['L']} but N*epsilon={Ns[0] * eps}"
        )
    if theory.get("m", 0.0) < 0:
        raise ConfigError("theory.m must be nonnegative")
    grid = config.get("time_grid", {})
    t_max = grid.get("t_max", grid.get("t_max_tau"))
    if t_max is None or t_max < 0:
        raise ConfigError("time_grid needs t_max >= 0 (or t_max_tau)")
    if t_max > 0 and grid.get("steps", 0) < 1:
        raise ConfigError("time_grid.steps must be >= 1")
    quench = config.get("quench", {"input": "vacuum"})
    if quench.get("input") not in {"vacuum", "coherent"}:
        raise ConfigError("quench.input must be vacuum or coherent")
    if quench.get("input") == "coherent" and "alpha" not in quench:
        raise ConfigError("coherent quench needs an alpha list")
    for obs in config.get("observables", []):
        if obs.get("kind") not in {"entropy", "mutual_information", "lightcone"}:
            raise ConfigError(f"unknown observable kind {obs.get('kind')!r}")


def _theory_sweep(theory: dict) -> list[int]:
    Ns = theory["N"]
    return list(Ns) if isinstance(Ns, list) else [Ns]


def _build_hamiltonian(theory: dict, N: int, alpha: float | None = None):
    tag = theory["tag"]
    eps = theory["epsilon"]
    m = theory.get("m", 0.0)
    if tag == "relativistic":
        return models.relativistic_hamiltonian(N, m, eps)
    if tag == "fractional":
        a = alpha if alpha is not None else theory.get("alpha")
        if a is None:
            raise ConfigError("fractional theory needs alpha")
        return models.fractional_hamiltonian(N, m, eps, a)
    if tag == "nonrelativistic":
        V = np.asarray(theory.get("V", np.zeros(N)), dtype=float)
        if V.shape != (N,):
            raise ConfigError(f"potential V must have length N={N}")
        return models.nonrelativistic_hamiltonian(N, m if m > 0 else 1.0, eps, V)
    if tag == "prequench":
        return models.prequench_hamiltonian(N, eps)
    profile = theory.get("metric", {"amplitude": 0.0, "width": 1.0})
    amp, width = profile.get("amplitude", 0.0), profile.get("width", 1.0)
    center = profile.get("center", 0.5 * N * eps)

    def factor(t, x):
        return 1.0 + amp * np.exp(-((x - center) ** 2) / (2.0 * width**2))

    return models.curved_spacetime_hamiltonian(N, m if m > 0 else 1.0, eps, factor)


def _times(grid: dict, tau: float | None) -> np.ndarray:
    if "t_max" in grid:
        t_max = float(grid["t_max"])
    else:
        if tau is None:
            raise ConfigError("t_max_tau requires an observable that defines tau")
        t_max = float(grid["t_max_tau"]) * tau
    if t_max == 0.0:
        return np.array([0.0])
    return np.linspace(0.0, t_max, int(grid["steps"]) + 1)


def _input_state(quench: dict, N: int) -> engine.GaussianState:
    if quench.get("input", "vacuum") == "vacuum":
        return engine.vacuum_state(N)
    raw = quench["alpha"]
    if len(raw) != N:
        raise ConfigError(f"coherent input needs {N} amplitudes, got {len(raw)}")
    alpha = np.array([complex(re, im) for re, im in raw])
    return engine.coherent_state(alpha)


def _squeeze_report(circuit: compiler.OTACircuit) -> dict:
    """Both squeezing-budget conventions: the literal max and the band edge.

    The most-squeezed band mode has the most negative z (reported as
    band_edge_abs_z); the literal max |z| is dominated by the k = 0 mode
    whenever the mass gap is small.
    """
    z = circuit.z
    return {
        "max_abs_z": float(np.abs(z).max()),
        "band_edge_abs_z": float(abs(z.min())),
        "max_z": float(z.max()),
    }


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _json_dump(doc: dict) -> str:
    doc = {"schema": SCHEMA_HEADER.lstrip("# "), **doc}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _map_ordered(fn, jobs, threads: int):
    """Apply fn over jobs, optionally on a thread pool, preserving order."""
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, jobs))
    return [fn(job) for job in jobs]


# --------------------------------------------------------------- compile


def cmd_compile(config: dict, args) -> int:
    sweep = _theory_sweep(config["theory"])
    if len(sweep) != 1:
        raise ConfigError("compile expects a single N, not a sweep")
    H = _build_hamiltonian(config["theory"], sweep[0])
    circuit = compiler.compile(H)
    doc = compiler.circuit_to_dict(circuit)
    doc["summary"] = {
        "gate_count": circuit.gate_count,
        **_squeeze_report(circuit),
    }
    out = Path(args.out)
    _write_text(out / "circuit.json", _json_dump(doc))
    print(
        f"compiled {H.theory} N={circuit.N}: {circuit.gate_count} gates "
        f"(N(N+2)={circuit.N * (circuit.N + 2)}), max|z|={np.abs(circuit.z).max():.4f}, "
        f"band-edge |z|={abs(circuit.z.min()):.4f}"
    )
    return 0


# ---------------------------------------------------------------- quench


def _resolve_entropy(obs: dict, N: int, eps: float):
    if "region" in obs:
        region = [int(j) for j in obs["region"]]
    else:
        ell_sites = int(round(obs.get("ell_fraction", 0.2) * N))
        if not 1 <= ell_sites < N:
            raise ConfigError(f"entropy region of {ell_sites} sites out of range for N={N}")
        region = list(range(1, ell_sites + 1))
    if any(not 1 <= j <= N for j in region):
        raise ConfigError(f"entropy region {region} outside 1..{N}")
    return region, len(region) * eps


def _resolve_mi(obs: dict, N: int, eps: float):
    if "region_a" in obs:
        ra = [int(j) for j in obs["region_a"]]
        rb = [int(j) for j in obs["region_b"]]
        ell_sites, d_sites = len(ra), min(rb) - max(ra) - 1
    else:
        ell_sites = int(round(obs.get("ell_fraction", 0.2) * N))
        d_sites = int(round(obs.get("d_fraction", 0.2) * N))
        ra = list(range(1, ell_sites + 1))
        rb = list(range(ell_sites + d_sites + 1, 2 * ell_sites + d_sites + 1))
    if any(not 1 <= j <= N for j in ra + rb) or d_sites < 1:
        raise ConfigError(f"regions A={ra}, B={rb} invalid for N={N}")
    ell, d = ell_sites * eps, d_sites * eps
    if N * eps - 2 * ell - d < 0:
        raise ConfigError(
            f"regions overlap around the ring: L={N * eps}, ell={ell}, d={d} "
            f"gives d' = {N * eps - 2 * ell - d}"
        )
    return ra, rb, ell, d


def _quench_one(job) -> tuple[list[str], dict]:
    config, N = job
    theory = config["theory"]
    eps, m, tag = theory["epsilon"], theory.get("m", 0.0), theory["tag"]
    if tag not in {"relativistic", "fractional"}:
        raise ConfigError(f"quench predictions need a translation-invariant theory, not {tag}")
    H = _build_hamiltonian(theory, N)
    circuit = compiler.compile(H)
    table = predict.dispersion(N, eps, m, tag, theory.get("alpha"))
    n = predict.populations(table, exclude_zero_modes=(m == 0.0))
    _, v_max = predict.group_velocity(table)
    L = N * eps

    observables = []
    tau = None
    for obs in config.get("observables", []):
        if obs["kind"] == "entropy":
            region, ell = _resolve_entropy(obs, N, eps)
            observables.append(("entropy", region, None, ell, None))
            tau = tau or ell / (2 * v_max)
        elif obs["kind"] == "mutual_information":
            ra, rb, ell, d = _resolve_mi(obs, N, eps)
            observables.append(("mutual_information", ra, rb, ell, d))
            tau = tau or d / (2 * v_max)
    if not observables:
        raise ConfigError("quench needs at least one entropy/mutual_information observable")

    times = _times(config["time_grid"], tau)
    state0 = _input_state(config.get("quench", {}), N)
    rows = []
    for t in times:
        state = engine.evolve(state0, compiler.evolution_matrix(circuit, t))
        for kind, ra, rb, ell, d in observables:
            if kind == "entropy":
                sim = engine.renyi2_entropy(engine.restrict(state, ra))
                fin = predict.entropy_finite(t, ell, L, table, n)
                inf = predict.entropy_infinite(t, ell, table)
                label = f"S2[N={N}]"
            else:
                sim = engine.renyi2_mutual_information(state, ra, rb)
                fin = predict.mutual_information_finite(t, ell, d, L, table, n)
                inf = predict.mutual_information_infinite(t, ell, d, table)
                label = f"I2[N={N}]"
            rows.append(f"{t:.12g},{sim:.12g},{fin:.12g},{inf:.12g},{label}")
    summary = {
        "N": N,
        "tau": tau,
        "v_max": v_max,
        "gate_count": circuit.gate_count,
        **_squeeze_report(circuit),
    }
    return rows, summary


def cmd_quench(config: dict, args) -> int:
    jobs = [(config, N) for N in _theory_sweep(config["theory"])]
    results = _map_ordered(_quench_one, jobs, args.threads)
    lines = [SCHEMA_HEADER, "t,sim_value,pred_finite,pred_infinite,observable"]
    summaries = []
    for rows, summary in results:
        lines.extend(rows)
        summaries.append(summary)
    out = Path(args.out)
    _write_text(out / "quench.csv", "\n".join(lines) + "\n")
    _write_text(out / "quench_summary.json", _json_dump({"runs": summaries}))
    print(f"quench: wrote {len(lines) - 2} rows for N sweep {[s['N'] for s in summaries]}")
    return 0


# ------------------------------------------------------------- lightcone


def _lightcone_one(job) -> tuple[str, list[str], dict]:
    config, alpha = job
    theory = config["theory"]
    N, eps, m = theory["N"], theory["epsilon"], theory.get("m", 1.0)
    obs = next(o for o in config["observables"] if o["kind"] == "lightcone")
    threshold = float(obs.get("threshold", 0.01))
    H = models.fractional_hamiltonian(N, m, eps, alpha)
    circuit = compiler.compile(H)
    times = _times(config["time_grid"], None)
    # Separations stop short of the antipodal pair (M + 1 = N/2), where
    # correlations arrive over both halves of the ring at once and the
    # crossing time no longer reflects one-way front propagation.
    seps = np.arange((N - 1) // 2)
    vac = engine.vacuum_state(N)
    values = np.zeros((len(times), len(seps)))
    for i, t in enumerate(times):
        state = engine.evolve(vac, compiler.evolution_matrix(circuit, t))
        for j, M in enumerate(seps):
            values[i, j] = engine.renyi2_mutual_information(state, [1], [int(M) + 2])
    grid = lightcone.CorrelationGrid(times, seps, values, eps, threshold)

    label = f"{alpha:g}"
    csv_lines = [
        SCHEMA_HEADER,
        f"# kind: lightcone_grid alpha={label} epsilon={eps:g} threshold={threshold:g}",
        "t,M,I2",
    ]
    for i, t in enumerate(times):
        for j, M in enumerate(seps):
            csv_lines.append(f"{t:.12g},{int(M)},{values[i, j]:.12g}")

    fit_doc: dict = {"alpha": alpha, **_squeeze_report(circuit)}
    try:
        fit = lightcone.classify_grid(grid)
        arrivals = lightcone.correlation_front(grid)
        fit_doc.update(
            model=fit.model,
            params=fit.params,
            residual=fit.residual,
            aicc=fit.aicc,
            arrivals=[
                [float(d), float(t)]
                for d, t in zip(grid.distances, arrivals)
                if np.isfinite(t)
            ],
        )
    except lightcone.NoFrontError as exc:
        fit_doc.update(model=None, no_front=str(exc))
    return label, csv_lines, fit_doc


def cmd_lightcone(config: dict, args) -> int:
    obs = [o for o in config.get("observables", []) if o["kind"] == "lightcone"]
    if not obs:
        raise ConfigError("lightcone needs a lightcone observable with an alphas list")
    alphas = obs[0].get("alphas", [])
    if not alphas:
        raise ConfigError("alpha sweep must be nonempty")
    if isinstance(config["theory"]["N"], list):
        raise ConfigError("lightcone expects a single N")
    results = _map_ordered(
        _lightcone_one, [(config, float(a)) for a in alphas], args.threads
    )
    out = Path(args.out)
    fits = []
    for label, csv_lines, fit_doc in results:
        _write_text(out / f"lightcone_alpha{label}.csv", "\n".join(csv_lines) + "\n")
        fits.append(fit_doc)
        name = fit_doc.get("model") or f"no front ({fit_doc.get('no_front')})"
        print(f"alpha={label}: {name}, band-edge |z|={fit_doc['band_edge_abs_z']:.4f}")
    report = {
        "threshold": obs[0].get("threshold", 0.01),
        "theory": config["theory"],
        "fits": fits,
    }
    _write_text(out / "front_fits.json", _json_dump(report))
    return 0


# ---------------------------------------------------------------- verify


def _oracle_suite(rng, n_max: int) -> tuple[float, int]:
    """Max operator deviation of compiled evolutions from expm(Omega H t)."""
    worst, cases = 0.0, 0
    for N in range(2, n_max + 1):
        hams = [
            models.relativistic_hamiltonian(N, 1.0, 0.7),
            models.fractional_hamiltonian(N, 1.0, 0.5, 1.3),
            models.nonrelativistic_hamiltonian(N, 1.0, 0.8, rng.uniform(0.0, 2.0, N)),
            models.curved_spacetime_hamiltonian(
                N, 1.0, 0.6, lambda t, x: 1.0 + 0.3 * np.sin(2 * np.pi * x / (0.6 * N)), 0.4
            ),
            models.prequench_hamiltonian(N, 1.1),
        ]
        for H in hams:
            circuit = compiler.compile(H)
            omega_h = symplectic_form(N) @ H.full()
            for t in (0.3, 1.7, 6.0):
                delta = compiler.evolution_matrix(circuit, t) - expm(omega_h * t)
                worst = max(worst, float(np.abs(delta).max()))
                cases += 1
    return worst, cases


def _gauge_suite(rng, n_max: int) -> tuple[float, int]:
    """bs_array(theta) must invert to the stacked eigenbasis P (+) P."""
    worst, cases = 0.0, 0
    for N in range(2, n_max + 1):
        H = models.fractional_hamiltonian(N, rng.uniform(0.5, 2.0), 0.9, rng.uniform(0.3, 2.0))
        circuit = compiler.compile(H)
        stacked = np.zeros((2 * N, 2 * N))
        stacked[:N, :N] = circuit.P
        stacked[N:, N:] = circuit.P
        resid = np.abs(circuit.bs_matrix() @ stacked - np.eye(2 * N)).max()
        worst = max(worst, float(resid))
        cases += 1
    return worst, cases


def _purity_suite(rng, n_max: int) -> tuple[float, int]:
    worst, cases = 0.0, 0
    for N in (2, max(3, n_max // 2), n_max):
        circuit = compiler.compile(models.relativistic_hamiltonian(N, 0.5, 1.2))
        vac = engine.vacuum_state(N)
        for t in rng.uniform(0.0, 20.0, 8):
            state = engine.evolve(vac, compiler.evolution_matrix(circuit, t))
            worst = max(worst, abs(engine.renyi2_entropy(state)))
            cases += 1
    return worst, cases


def uncertainty_residual(cov: np.ndarray) -> float:
    """How far the smallest symplectic eigenvalue dips below vacuum 1/2."""
    nu_min = float(engine.symplectic_spectrum(cov).min())
    return max(0.0, 0.5 - nu_min)


def _uncertainty_suite(rng, n_max: int) -> tuple[float, int]:
    worst, cases = 0.0, 0
    for N in (2, n_max):
        circuit = compiler.compile(models.fractional_hamiltonian(N, 1.0, 0.4, 1.7))
        vac = engine.vacuum_state(N)
        for t in rng.uniform(0.0, 12.0, 6):
            state = engine.evolve(vac, compiler.evolution_matrix(circuit, t))
            worst = max(worst, uncertainty_residual(state.cov))
            cases += 1
    return worst, cases


VERIFY_SUITES = {
    "oracle_equivalence": (_oracle_suite, 1e-8),
    "beam_splitter_gauge": (_gauge_suite, 1e-9),
    "vacuum_purity": (_purity_suite, 1e-9),
    "uncertainty_relation": (_uncertainty_suite, 1e-9),
}


def cmd_verify(config: dict, args) -> int:
    n_max = int(config.get("verify", {}).get("n_max", 8)) if config else 8
    seed = args.seed if args.seed is not None else (config or {}).get("seed", 0)
    report = {"seed": seed, "n_max": n_max, "suites": []}
    failed = False
    for name, (suite, tol) in VERIFY_SUITES.items():
        rng = np.random.default_rng(seed)
        residual, cases = suite(rng, n_max)
        ok = residual < tol
        failed = failed or not ok
        report["suites"].append(
            {"name": name, "passed": bool(ok), "residual": residual, "tolerance": tol, "cases": cases}
        )
        print(f"{name}: {'pass' if ok else 'FAIL'} (residual {residual:.3e} < {tol:.0e}, {cases} cases)")
    out = Path(args.out)
    _write_text(out / "verify_report.json", _json_dump(report))
    return 1 if failed else 0


# ------------------------------------------------------------------ main


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ota-sim",
        description="Compile scalar-field Hamiltonians to optical circuits and run quench studies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_config in (
        ("compile", True),
        ("quench", True),
        ("lightcone", True),
        ("verify", False),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", help="path to an experiment JSON file")
        p.add_argument("--preset", help="name of a shipped preset")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--threads", type=int, default=1, help="parallel sweep workers")
        p.add_argument("--seed", type=int, default=None, help="seed for randomized suites")
        p.set_defaults(needs_config=needs_config)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "compile": cmd_compile,
        "quench": cmd_quench,
        "lightcone": cmd_lightcone,
        "verify": cmd_verify,
    }
    try:
        if args.needs_config or args.config or args.preset:
            config = _load_config(args)
        else:
            config = {}
        return handlers[args.command](config, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (compiler.IneligibleHamiltonianError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
