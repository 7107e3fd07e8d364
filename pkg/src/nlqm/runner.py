"""Execute a :class:`RunConfig` and write its artifacts."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analytic, appendix, reduced, spatial
from .config import ConfigError, RunConfig
from .errors import ContractViolation
from .hilbert import Coupling, HermitianOperator, ReducedState, random_hermitian
from .integrator import Trajectory, integrate, integrate_linearized
from .stepper import IntegratorConfig

OBSERVABLE_COLUMNS = ("N", "tau", "Re_gamma", "Im_gamma", "delta", "omega0_sq", "schwarz", "purity")


@dataclass
class Check:
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tol)


@dataclass
class RunResult:
    mode: str
    table: dict
    drift: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    @property
    def state_columns(self):
        return [c for c in self.table if c.startswith(("Re_psi_", "Im_psi_", "Re_phi_", "Im_phi_"))]

    @property
    def observable_columns(self):
        return [c for c in self.table if c not in self.state_columns]


def build_hamiltonian(cfg: RunConfig) -> HermitianOperator:
    h = cfg["hamiltonian"]
    if h["kind"] == "random":
        return random_hermitian(int(h["dim"]), int(h["seed"]))
    if h["kind"] == "diag":
        return HermitianOperator.diagonal([float(x) for x in h["values"]])
    path = Path(h["path"])
    try:
        m = np.load(path) if path.suffix == ".npy" else np.loadtxt(path, dtype=np.complex128, delimiter=None)
        return HermitianOperator(np.atleast_2d(m))
    except (OSError, ValueError) as exc:
        raise ConfigError("hamiltonian.path", str(exc)) from exc


def coupling_of(cfg: RunConfig) -> Coupling:
    return Coupling(float(cfg["coupling"]["a"]), float(cfg["coupling"]["b"]))


def integrator_of(cfg: RunConfig) -> IntegratorConfig:
    i = cfg["integrator"]
    return IntegratorConfig(i["method"], float(i["abs_tol"]), float(i["rel_tol"]), float(i["max_step"]),
                            float(i["initial_step"]))


def sample_times(cfg: RunConfig) -> np.ndarray:
    t = cfg["time"]
    return np.linspace(float(t["t_start"]), float(t["t_end"]), int(t["n_samples"]))


def coefficient_pair(cfg: RunConfig, dim: int):
    A, B = cfg.complex_vector("states.A"), cfg.complex_vector("states.B")
    if (A is None) != (B is None):
        raise ConfigError("states.A", "give both states.A and states.B or neither")
    if A is None:
        return analytic.random_orthonormal_pair(dim, int(cfg["states"]["seed"]))
    if A.shape != (dim,) or B.shape != (dim,):
        raise ConfigError("states.A", f"coefficient vectors must have length {dim}")
    return A, B


def analytic_spec(cfg: RunConfig, H: HermitianOperator) -> analytic.AnalyticSolutionSpec:
    s = cfg["solution"]
    A, B = coefficient_pair(cfg, H.dim)
    return analytic.validate_spec(analytic.AnalyticSolutionSpec(
        A, B, float(s["omega0"]), float(s["vartheta"]), float(s["theta"]), coupling_of(cfg), H, float(s["t0"])))


def _state_table(times, psi, phi):
    table = {"t": np.asarray(times, dtype=float)}
    for name, arr in (("psi", psi), ("phi", phi)):
        for n in range(arr.shape[1]):
            table[f"Re_{name}_{n}"] = arr[:, n].real
            table[f"Im_{name}_{n}"] = arr[:, n].imag
    return table


def trajectory_table(traj: Trajectory) -> dict:
    table = _state_table(traj.times, traj.psi, traj.phi)
    gamma = traj.gamma
    table.update(N=traj.N, tau=traj.tau, Re_gamma=gamma.real, Im_gamma=gamma.imag, delta=traj.delta,
                 omega0_sq=traj.omega0_sq, schwarz=traj.schwarz, purity=traj.purity)
    return table


def _max_dev(a, b):
    return float(np.max(np.linalg.norm(np.asarray(a) - np.asarray(b), axis=-1)))


def _analytic_trajectory(spec, times):
    pairs = [analytic.state_pair_at(spec, t) for t in times]
    psi = np.array([p.amplitudes for p, _ in pairs])
    phi = np.array([f.amplitudes for _, f in pairs])
    return Trajectory(np.asarray(times, dtype=float), psi, phi, spec.H.basis_tag)


def _exceptional_trajectory(spec, times):
    psi = np.array([spec.A_state(t).amplitudes for t in times])
    phi = np.array([spec.B_state(t).amplitudes for t in times])
    return Trajectory(np.asarray(times, dtype=float), psi, phi, spec.H.basis_tag)


def _run_state_mode(cfg: RunConfig) -> RunResult:
    H = build_hamiltonian(cfg)
    spec = analytic_spec(cfg, H)
    times = sample_times(cfg)
    g = coupling_of(cfg)
    orthogonal = cfg["states"]["init"] == "orthogonal"
    oracle = _exceptional_trajectory(spec, times) if orthogonal else _analytic_trajectory(spec, times)
    mode = cfg.mode
    if mode == "analytic":
        traj = oracle
    elif mode == "nonlinear":
        traj = integrate(oracle.psi[0], oracle.phi[0], H, g, (times[0], times[-1]), integrator_of(cfg),
                         times, rhs_variant=cfg["rhs_variant"])
    else:
        p = spec.reduced_params

        def gamma_fn(t):
            return 0.0 if orthogonal else reduced.gamma_analytic(p, t)

        traj = integrate_linearized(oracle.psi[0], oracle.phi[0], H, g, gamma_fn, (times[0], times[-1]),
                                    integrator_of(cfg), times)
    drift = dict(traj.drift_report)
    drift["state_deviation"] = max(_max_dev(traj.psi, oracle.psi), _max_dev(traj.phi, oracle.phi))
    drift["max_abs_gamma"] = float(np.max(np.abs(traj.gamma)))
    drift["purity_identity"] = float(np.max(np.abs(traj.purity - (1 - 2 * traj.schwarz / traj.N**2))))
    drift["n_steps"] = traj.n_steps
    return RunResult(mode, trajectory_table(traj), drift)


def _run_reduced(cfg: RunConfig) -> RunResult:
    H = build_hamiltonian(cfg)
    spec = analytic_spec(cfg, H)
    times = sample_times(cfg)
    p = spec.reduced_params
    tau0, delta0 = reduced.tau_delta_analytic(p, times[0])
    init = ReducedState.from_scalars(spec.N, tau0, reduced.gamma_analytic(p, times[0]))
    rt = reduced.integrate_reduced(init, coupling_of(cfg), (times[0], times[-1]), integrator_of(cfg), times)
    tau_a, _ = reduced.tau_delta_analytic(p, times)
    gam_a = reduced.gamma_analytic(p, times)
    table = {"t": times, "N": rt.N, "tau": rt.tau, "Re_gamma": rt.gamma.real, "Im_gamma": rt.gamma.imag,
             "delta": rt.delta, "omega0_sq": rt.omega0_sq}
    drift = {
        "N_rel": float(np.max(np.abs(rt.N - rt.N[0])) / rt.N[0]),
        "omega0_sq": float(np.max(np.abs(rt.omega0_sq - rt.omega0_sq[0]))),
        "tau_vs_closed_form": float(np.max(np.abs(rt.tau - tau_a))),
        "gamma_vs_closed_form": float(np.max(np.abs(rt.gamma - gam_a))),
    }
    return RunResult("reduced", table, drift)


def _run_spatial(cfg: RunConfig) -> RunResult:
    sp = cfg["spatial"]
    grid = spatial.Grid1D(float(sp["x_min"]), float(sp["x_max"]), int(sp["n_points"]))
    basis, H = spatial.plane_wave_modes(grid, sp["modes"])
    spec = analytic_spec(cfg, H)
    times = sample_times(cfg)
    p0, f0 = analytic.state_pair_at(spec, times[0])
    psi0, phi0 = spatial.embed(grid, basis, p0.amplitudes), spatial.embed(grid, basis, f0.amplitudes)
    trap = float(sp["trap_omega"])
    pot = spatial.harmonic_potential(grid, trap) if trap > 0 else None
    tr = spatial.evolve_pair_splitstep(psi0, phi0, coupling_of(cfg), (times[0], times[-1]), float(sp["dt"]), pot)
    gam_a = np.abs(reduced.gamma_analytic(spec.reduced_params, tr.times))
    table = {"t": tr.times, "N": tr.N, "tau": tr.tau, "Re_gamma": tr.gamma.real, "Im_gamma": tr.gamma.imag,
             "delta": tr.delta, "omega0_sq": tr.omega0_sq}
    drift = {
        "N_rel": float(np.max(np.abs(tr.N - tr.N[0])) / tr.N[0]),
        "omega0_sq": float(np.max(np.abs(tr.omega0_sq - tr.omega0_sq[0]))),
        "abs_gamma_vs_sech": float(np.max(np.abs(np.abs(tr.gamma) - gam_a))),
    }
    return RunResult("spatial", table, drift)


def _run_appendix_a(cfg: RunConfig) -> RunResult:
    H = build_hamiltonian(cfg)
    g = coupling_of(cfg)
    times = sample_times(cfg)
    t0 = float(cfg["appendix_a"]["t0"])
    rng = np.random.default_rng(int(cfg["states"]["seed"]))
    v = rng.standard_normal(H.dim) + 1j * rng.standard_normal(H.dim)
    v /= np.linalg.norm(v)
    if g.b == 0:
        spec = appendix.SingleVectorSpec(H.to_eigenbasis(v), g, H, times[0])
        law = np.full(times.size, spec.N0)
        oracle = np.array([appendix.single_vector_real_g(spec, t).amplitudes for t in times])
    else:
        law = np.array([appendix.single_vector_complex_g_norm(g.b, t0, t) for t in times])
        oracle = None
    psi0 = v * math.sqrt(law[0])
    tr = appendix.integrate_single(psi0, H, g, (times[0], times[-1]), integrator_of(cfg), times)
    table = {"t": times}
    for n in range(H.dim):
        table[f"Re_psi_{n}"] = tr.psi[:, n].real
        table[f"Im_psi_{n}"] = tr.psi[:, n].imag
    table["norm"] = tr.norm_sq
    table["norm_law"] = law
    drift = {"norm_vs_law": float(np.max(np.abs(tr.norm_sq - law)))}
    if oracle is not None:
        drift["state_deviation"] = _max_dev(tr.psi, oracle)
    return RunResult("appendix_a", table, drift)


def _run_appendix_b(cfg: RunConfig) -> RunResult:
    H = build_hamiltonian(cfg)
    ab = cfg["appendix_b"]
    a_dir, b_dir = coefficient_pair(cfg, H.dim)
    spec = appendix.real_g_spec(a_dir, b_dir, float(ab["tau0"]), cfg.gamma0(), float(ab["g_real"]), H,
                                float(ab["a_weight"]))
    times = sample_times(cfg)
    pairs = [appendix.real_g_state_pair(spec, t) for t in times]
    psi_a = np.array([p.amplitudes for p, _ in pairs])
    phi_a = np.array([f.amplitudes for _, f in pairs])
    traj = integrate(psi_a[0], phi_a[0], H, Coupling(spec.g_real, 0.0), (times[0], times[-1]),
                     integrator_of(cfg), times)
    drift = dict(traj.drift_report)
    drift["tau_drift"] = float(np.max(np.abs(traj.tau - spec.tau0)))
    drift["delta_drift"] = float(np.max(np.abs(traj.delta - spec.delta0)))
    drift["state_deviation"] = max(_max_dev(traj.psi, psi_a), _max_dev(traj.phi, phi_a))
    return RunResult("appendix_b", trajectory_table(traj), drift)


def run_config(cfg: RunConfig) -> RunResult:
    """Run ``cfg`` in memory. Raises config/contract errors and ``IntegrationError``."""
    mode = cfg.mode
    if mode in ("analytic", "nonlinear", "linearized"):
        res = _run_state_mode(cfg)
    elif mode == "reduced":
        res = _run_reduced(cfg)
    elif mode == "spatial":
        res = _run_spatial(cfg)
    elif mode == "appendix_a":
        res = _run_appendix_a(cfg)
    elif mode == "appendix_b":
        res = _run_appendix_b(cfg)
    elif mode == "verify":
        from .verification import run_suite

        checks = run_suite(cfg["suite"])
        return RunResult("verify", {}, {c.name: c.value for c in checks}, checks)
    else:  # pragma: no cover - guarded by RunConfig.validate
        raise ContractViolation(f"unknown mode {mode}")
    for name, tol in cfg["checks"].items():
        if name not in res.drift:
            raise ConfigError(f"checks.{name}", f"unknown metric; available: {sorted(res.drift)}")
        res.checks.append(Check(name, float(res.drift[name]), float(tol)))
    return res


def _fmt(x) -> str:
    return format(float(x), ".17g")


def table_to_csv(table: dict, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    n = len(table["t"]) if "t" in table else 0
    for i in range(n):
        w.writerow([_fmt(table[c][i]) for c in columns])
    return buf.getvalue()


def read_csv_table(path) -> dict:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    return {c: np.array([float(r[j]) for r in body]) for j, c in enumerate(header)}


def drift_payload(result: RunResult) -> dict:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return str(v)
        return v

    return {
        "mode": result.mode,
        "status": "ok" if result.ok else ("error" if result.error else "check_failed"),
        "error": result.error,
        "drift": {k: clean(v) for k, v in result.drift.items()},
        "checks": [{"name": c.name, "value": clean(c.value), "tol": c.tol, "passed": c.passed}
                   for c in result.checks],
    }


def write_outputs(result: RunResult, directory, formats=("csv", "json")) -> list:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in formats and result.table:
        cols = list(result.table)
        (out / "trajectory.csv").write_text(table_to_csv(result.table, cols))
        obs = ["t"] + [c for c in result.observable_columns if c != "t"]
        (out / "observables.csv").write_text(table_to_csv(result.table, obs))
        written += [out / "trajectory.csv", out / "observables.csv"]
    if "json" in formats:
        (out / "drift_report.json").write_text(json.dumps(drift_payload(result), indent=2, sort_keys=True) + "\n")
        written.append(out / "drift_report.json")
    if "svg" in formats and result.table:
        from .plotting import plot_observables

        written += plot_observables(result.table, out)
    return written
