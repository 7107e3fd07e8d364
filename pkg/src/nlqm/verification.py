"""Invariant suites behind ``nlqm verify``.

Each suite returns a list of :class:`~nlqm.runner.Check` entries
``(name, value, tol)``; a check passes when ``value <= tol``. The suites are
small versions of the acceptance runs and finish in a few seconds.
"""

from __future__ import annotations

import math

import numpy as np

from . import analytic, appendix, reduced, spatial
from .errors import ExistenceWindowError
from .hilbert import Coupling, ReducedState, density_matrix, random_hermitian
from .integrator import integrate, integrate_linearized, nonlinear_rhs
from .stepper import IntegratorConfig

SUITES = ("reduced", "analytic", "integrator", "appendix", "spatial")


def reference_spec(dim: int = 4, g: complex = 1 + 0.5j, omega0: float = 1.0, vartheta: float = 0.3,
                   theta: float = 0.7, h_seed: int = 42, state_seed: int = 1) -> analytic.AnalyticSolutionSpec:
    """Random-Hamiltonian closed-form pair used across suites and acceptance runs."""
    H = random_hermitian(dim, h_seed)
    A, B = analytic.random_orthonormal_pair(dim, state_seed)
    return analytic.spec_from_directions(H, A, B, omega0, vartheta, theta, Coupling.from_complex(g))


def _check(name, value, tol):
    from .runner import Check

    return Check(name, float(value), float(tol))


def _pair_arrays(spec, times):
    pairs = [analytic.state_pair_at(spec, t) for t in times]
    return (np.array([p.amplitudes for p, _ in pairs]), np.array([f.amplitudes for _, f in pairs]))


def suite_reduced():
    p = reduced.ReducedParams(1.0, 0.7, Coupling(1.0, 0.5))
    times = np.linspace(-3, 3, 31)
    tau0, _ = reduced.tau_delta_analytic(p, times[0])
    init = ReducedState.from_scalars(2.0, tau0, reduced.gamma_analytic(p, times[0]))
    rt = reduced.integrate_reduced(init, p.g, (times[0], times[-1]), t_eval=times)
    tau_a, delta_a = reduced.tau_delta_analytic(p, times)
    branches = [reduced.classify_branch(-1.0).physical, reduced.classify_branch(1.0, "coth").physical,
                not reduced.classify_branch(1.0).physical]
    return [
        _check("reduced.tau_vs_closed_form", np.max(np.abs(rt.tau - tau_a)), 1e-8),
        _check("reduced.gamma_vs_closed_form", np.max(np.abs(rt.gamma - reduced.gamma_analytic(p, times))), 1e-8),
        _check("reduced.delta_vs_closed_form", np.max(np.abs(rt.delta - delta_a)), 1e-8),
        _check("reduced.omega0_sq_drift", np.max(np.abs(rt.omega0_sq - 1.0)), 1e-8),
        _check("reduced.unphysical_branches_flagged", float(sum(branches)), 0.0),
    ]


def suite_analytic():
    spec = reference_spec()
    rng = np.random.default_rng(7)
    h = 1e-5
    worst = 0.0
    for t in rng.uniform(-3, 3, 20):
        pm, fm = analytic.state_pair_at(spec, t - h)
        pp, fp = analytic.state_pair_at(spec, t + h)
        p0, f0 = analytic.state_pair_at(spec, t)
        dp, df = nonlinear_rhs(p0, f0, spec.H, spec.g)
        worst = max(worst, np.linalg.norm((pp.amplitudes - pm.amplitudes) / (2 * h) - dp),
                    np.linalg.norm((fp.amplitudes - fm.amplitudes) / (2 * h) - df))
    p0, f0 = analytic.state_pair_at(spec, 0.4)
    rho = density_matrix(p0, f0)
    expected = np.sort(2 * spec.omega0 / spec.N * np.array([math.sinh(spec.vartheta) ** 2,
                                                            math.cosh(spec.vartheta) ** 2]))
    unitary = 0.0
    for a, b, th in rng.uniform(-2, 2, (100, 3)):
        if abs(b) < 1e-3:
            continue
        m = analytic.s_matrix(Coupling(a, b), th).entries
        unitary = max(unitary, np.max(np.abs(m @ m.conj().T - np.eye(2))))
    return [
        _check("analytic.finite_difference_residual", worst, 1e-6),
        _check("analytic.N_equals_2w0_cosh2v", abs(p0.norm_sq + f0.norm_sq - spec.N), 1e-10),
        _check("analytic.rho_eigenvalues", np.max(np.abs(rho.eigenvalues[-2:] - expected)), 1e-8),
        _check("analytic.s_matrix_unitarity", unitary, 1e-12),
    ]


def suite_integrator():
    spec = reference_spec()
    times = np.linspace(-2, 2, 41)
    psi_a, phi_a = _pair_arrays(spec, times)
    cfg = IntegratorConfig(abs_tol=1e-10, rel_tol=1e-10)
    tr = integrate(psi_a[0], phi_a[0], spec.H, spec.g, (-2, 2), cfg, times)
    p = spec.reduced_params
    lin = integrate_linearized(psi_a[0], phi_a[0], spec.H, spec.g, lambda t: reduced.gamma_analytic(p, t),
                               (-2, 2), cfg, times)
    dev = max(np.max(np.linalg.norm(tr.psi - psi_a, axis=1)), np.max(np.linalg.norm(tr.phi - phi_a, axis=1)))
    lin_dev = max(np.max(np.linalg.norm(tr.psi - lin.psi, axis=1)), np.max(np.linalg.norm(tr.phi - lin.phi, axis=1)))
    A, B = analytic.random_orthonormal_pair(4, 3)
    ex = integrate(A, B, spec.H, spec.g, (0, 2), cfg, np.linspace(0, 2, 11))
    d = tr.drift_report
    return [
        _check("integrator.state_vs_closed_form", dev, 1e-6),
        _check("integrator.linearized_vs_nonlinear", lin_dev, 1e-6),
        _check("integrator.N_rel_drift", d["N_rel"], 1e-8),
        _check("integrator.omega0_sq_drift", d["omega0_sq"], 1e-8),
        _check("integrator.schwarz_drift", d["schwarz"], 1e-8),
        _check("integrator.orthogonal_pair_gamma", np.max(np.abs(ex.gamma)), 1e-8),
    ]


def suite_appendix():
    b, t0 = -0.5, 0.0
    h = 1e-5
    fd = 0.0
    for t in np.linspace(1.0, 3.0, 21):
        n = appendix.single_vector_complex_g_norm(b, t0, t)
        dn = (appendix.single_vector_complex_g_norm(b, t0, t + h)
              - appendix.single_vector_complex_g_norm(b, t0, t - h)) / (2 * h)
        fd = max(fd, abs(dn - 2 * b * n * n))
    H = random_hermitian(3, 5)
    rng = np.random.default_rng(11)
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    times = np.linspace(1.0, 3.0, 21)
    law = np.array([appendix.single_vector_complex_g_norm(b, t0, t) for t in times])
    tr = appendix.integrate_single(v / np.linalg.norm(v) * math.sqrt(law[0]), H, Coupling(0.8, b), (1.0, 3.0),
                                   IntegratorConfig(abs_tol=1e-11, rel_tol=1e-11), times)
    try:
        appendix.single_vector_complex_g_norm(b, t0, -1.0)
        window = 1.0
    except ExistenceWindowError:
        window = 0.0

    H4 = random_hermitian(4, 42)
    A, B = analytic.random_orthonormal_pair(4, 1)
    spec = appendix.real_g_spec(A, B, 0.7, 0.8 + 0.3j, 1.3, H4)
    ts = np.linspace(0, spec.period, 41)
    p0, f0 = appendix.real_g_state_pair(spec, 0.0)
    rb = integrate(p0, f0, H4, Coupling(1.3, 0.0), (0, spec.period), IntegratorConfig(abs_tol=1e-11, rel_tol=1e-11), ts)
    kdiff = 0.0
    for tau0, delta0 in zip(rng.uniform(-3, 3, 1000), rng.uniform(1e-3, 5, 1000)):
        k1, k2 = appendix.real_g_k(tau0, delta0)
        # k spans orders of magnitude over this range, so compare relatively
        kdiff = max(kdiff, abs(k1 - k2) / k1)
    return [
        _check("appendix.norm_law_ode", fd, 1e-6),
        _check("appendix.numeric_norm_vs_law", np.max(np.abs(tr.norm_sq - law)), 1e-6),
        _check("appendix.existence_window_raises", window, 0.0),
        _check("appendix.real_g_tau_drift", np.max(np.abs(rb.tau - spec.tau0)), 1e-8),
        _check("appendix.real_g_delta_drift", np.max(np.abs(rb.delta - spec.delta0)), 1e-8),
        _check("appendix.k_forms_rel_diff", kdiff, 1e-12),
    ]


def suite_spatial():
    grid = spatial.Grid1D(-10.0, 10.0, 256)
    basis, H = spatial.plane_wave_modes(grid, [-3, -1, 2, 5])
    A, B = analytic.random_orthonormal_pair(4, 1)
    spec = analytic.spec_from_directions(H, A, B, 1.0, 0.3, 0.7, Coupling(1.0, 0.5))
    p0, f0 = analytic.state_pair_at(spec, 0.0)
    tr = spatial.evolve_pair_splitstep(spatial.embed(grid, basis, p0.amplitudes),
                                       spatial.embed(grid, basis, f0.amplitudes), spec.g, (0.0, 0.5), 1e-3)
    sech = np.abs(reduced.gamma_analytic(spec.reduced_params, tr.times))
    return [
        _check("spatial.abs_gamma_vs_sech", np.max(np.abs(np.abs(tr.gamma) - sech)), 1e-4),
        _check("spatial.N_rel_drift", np.max(np.abs(tr.N - tr.N[0])) / tr.N[0], 1e-6),
    ]


_SUITE_FUNCS = {"reduced": suite_reduced, "analytic": suite_analytic, "integrator": suite_integrator,
                "appendix": suite_appendix, "spatial": suite_spatial}


def run_suite(name: str = "all"):
    names = SUITES if name == "all" else (name,)
    checks = []
    for n in names:
        if n not in _SUITE_FUNCS:
            raise ValueError(f"unknown suite {n!r}; choose from all, {', '.join(SUITES)}")
        checks.extend(_SUITE_FUNCS[n]())
    return checks


def format_summary(checks) -> str:
    width = max((len(c.name) for c in checks), default=4)
    lines = [f"{'check':<{width}}  {'max drift':>12}  {'tol':>8}  status"]
    for c in checks:
        lines.append(f"{c.name:<{width}}  {c.value:>12.3e}  {c.tol:>8.0e}  {'PASS' if c.passed else 'FAIL'}")
    n_ok = sum(c.passed for c in checks)
    lines.append(f"{n_ok}/{len(checks)} checks passed")
    return "\n".join(lines)
