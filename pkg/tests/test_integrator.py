import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlqm.analytic import random_orthonormal_pair, spec_from_directions, state_pair_at
from nlqm.errors import ContractViolation, IntegrationError
from nlqm.hilbert import Coupling, HermitianOperator, evolve_linear, random_hermitian, random_state
from nlqm.integrator import integrate, integrate_linearized, linear_rhs, nonlinear_rhs
from nlqm.reduced import gamma_analytic
from nlqm.stepper import IntegratorConfig

TIGHT = IntegratorConfig(abs_tol=1e-11, rel_tol=1e-11)
H2 = HermitianOperator.diagonal([0.0, 1.0])


def _pairs(spec, ts):
    pairs = [state_pair_at(spec, t) for t in ts]
    return np.array([p.amplitudes for p, _ in pairs]), np.array([f.amplitudes for _, f in pairs])


def test_zero_coupling_is_linear():
    H = random_hermitian(3, 2)
    psi, phi = random_state(3, 0), random_state(3, 1)
    dp, df = nonlinear_rhs(psi, phi, H, Coupling(0.0, 0.0))
    np.testing.assert_allclose(dp, linear_rhs(psi, H))
    np.testing.assert_allclose(df, linear_rhs(phi, H))


def test_orthogonal_pair_decouples():
    dp, df = nonlinear_rhs([1, 0], [0, 1j], H2, Coupling(2.0, -1.0))
    np.testing.assert_allclose(dp, [0, 0])
    np.testing.assert_allclose(df, [0, 1])


def test_hand_substitution():
    s = 1 / math.sqrt(2)
    dp, df = nonlinear_rhs([1, 0], [s, 0], H2, Coupling(1.0, 0.0))
    np.testing.assert_allclose(dp, [-0.5j, 0])
    np.testing.assert_allclose(df, [-1j * s, 0])


def test_printed_variant_literal():
    s = 1 / math.sqrt(2)
    g = Coupling(1.0, 0.5)
    _, df = nonlinear_rhs([1, 0], [s, 0], H2, g, rhs_variant="printed")
    # g^* <psi|psi> phi with <psi|psi> = 1
    np.testing.assert_allclose(df, [-1j * (1 - 0.5j) * s, 0])
    with pytest.raises(ContractViolation):
        nonlinear_rhs([1, 0], [s, 0], H2, g, rhs_variant="other")


def test_printed_variant_leaves_closed_form(ref_spec):
    ts = np.linspace(-2, 2, 9)
    psi_a, phi_a = _pairs(ref_spec, ts)
    tr = integrate(psi_a[0], phi_a[0], ref_spec.H, ref_spec.g, (-2, 2), TIGHT, ts, rhs_variant="printed")
    assert np.max(np.linalg.norm(tr.psi - psi_a, axis=1)) > 1e-2


def test_dimension_contract():
    with pytest.raises(ContractViolation):
        integrate([1, 0, 0], [0, 1, 0], H2, Coupling(1.0, 0.5), (0, 1))
    with pytest.raises(ContractViolation):
        nonlinear_rhs([1, 0], [0, 1, 0], H2, Coupling(1.0, 0.5))


@pytest.mark.parametrize("t_span", [(-2.0, 2.0), (3.0, -1.0)])
def test_matches_closed_form(ref_spec, t_span):
    ts = np.linspace(*t_span, 21)
    psi_a, phi_a = _pairs(ref_spec, ts)
    tr = integrate(psi_a[0], phi_a[0], ref_spec.H, ref_spec.g, t_span, IntegratorConfig(), ts)
    assert np.max(np.linalg.norm(tr.psi - psi_a, axis=1)) < 1e-6
    assert np.max(np.linalg.norm(tr.phi - phi_a, axis=1)) < 1e-6
    assert tr.drift_report["N_rel"] < 1e-8
    assert tr.drift_report["omega0_sq"] < 1e-8


def test_orthogonal_init_follows_linear_evolution(ref_spec):
    A, B = random_orthonormal_pair(4, 5)
    ts = np.linspace(0, 3, 7)
    tr = integrate(A, B, ref_spec.H, ref_spec.g, (0, 3), IntegratorConfig(), ts)
    for t, p, f in zip(ts, tr.psi, tr.phi):
        np.testing.assert_allclose(p, evolve_linear(ref_spec.H, A, t).amplitudes, atol=1e-8)
        np.testing.assert_allclose(f, evolve_linear(ref_spec.H, B, t).amplitudes, atol=1e-8)
    assert np.max(np.abs(tr.gamma)) < 1e-8


def test_linearized_zero_gamma_is_linear(ref_spec):
    psi0, phi0 = random_state(4, 1), random_state(4, 2)
    tr = integrate_linearized(psi0, phi0, ref_spec.H, ref_spec.g, lambda t: 0.0, (0, 2), TIGHT)
    np.testing.assert_allclose(tr.psi[-1], evolve_linear(ref_spec.H, psi0, 2).amplitudes, atol=1e-9)
    np.testing.assert_allclose(tr.phi[-1], evolve_linear(ref_spec.H, phi0, 2).amplitudes, atol=1e-9)


def test_linearized_self_consistent(ref_spec):
    p = ref_spec.reduced_params
    ts = np.linspace(-2, 2, 21)
    psi_a, phi_a = _pairs(ref_spec, ts)
    lin = integrate_linearized(psi_a[0], phi_a[0], ref_spec.H, ref_spec.g, lambda t: gamma_analytic(p, t),
                               (-2, 2), TIGHT, ts)
    # the overlap generated by the linear problem reproduces the prescribed gamma
    np.testing.assert_allclose(lin.gamma, gamma_analytic(p, ts), atol=1e-8)
    full = integrate(psi_a[0], phi_a[0], ref_spec.H, ref_spec.g, (-2, 2), TIGHT, ts)
    assert np.max(np.linalg.norm(lin.psi - full.psi, axis=1)) < 1e-6


def test_time_reversal_real_hamiltonian():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((3, 3))
    H = HermitianOperator(m + m.T)
    g = Coupling(0.7, 0.4)
    psi0, phi0 = random_state(3, 4).amplitudes, random_state(3, 5).amplitudes
    back = integrate(psi0, phi0, H, g, (0, -1.5), TIGHT)
    # (conj phi(-t), conj psi(-t)) is again a solution
    fwd = integrate(phi0.conj(), psi0.conj(), H, g, (0, 1.5), TIGHT)
    np.testing.assert_allclose(fwd.psi[-1], back.phi[-1].conj(), atol=1e-8)
    np.testing.assert_allclose(fwd.phi[-1], back.psi[-1].conj(), atol=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10_000), st.floats(-2, 2), st.floats(-1, 1))
def test_conserved_quantities(dim, seed, a, b):
    H = random_hermitian(dim, seed)
    psi0, phi0 = random_state(dim, seed + 1), random_state(dim, seed + 2)
    n0 = psi0.norm_sq + phi0.norm_sq
    psi0 = psi0.amplitudes / math.sqrt(n0)
    phi0 = phi0.amplitudes / math.sqrt(n0)
    tr = integrate(psi0, phi0, H, Coupling(a, b), (0, 1), TIGHT, np.linspace(0, 1, 6))
    d = tr.drift_report
    assert d["N_rel"] < 1e-8
    assert d["omega0_sq"] < 1e-8
    assert d["schwarz"] < 1e-8
    np.testing.assert_allclose(tr.purity, 1 - 2 * tr.schwarz / tr.N**2, atol=1e-12)


def test_trajectory_observables(ref_spec):
    ts = np.linspace(0, 1, 3)
    psi_a, phi_a = _pairs(ref_spec, ts)
    tr = integrate(psi_a[0], phi_a[0], ref_spec.H, ref_spec.g, (0, 1), t_eval=ts)
    obs = tr.observables
    assert len(obs) == 3 and obs[1].N == pytest.approx(tr.N[1])
    assert tr.psi_states[0].dim == 4
    np.testing.assert_allclose(tr.delta, np.abs(tr.gamma) ** 2)


def test_integration_failure_carries_time(ref_spec):
    psi_a, phi_a = _pairs(ref_spec, [0.0])
    with pytest.raises(IntegrationError) as exc:
        integrate(psi_a[0], phi_a[0], ref_spec.H, ref_spec.g, (0, 5), IntegratorConfig(max_steps=3))
    assert 0 <= exc.value.last_good_time < 5


def test_forward_from_far_past_is_ill_conditioned(ref_spec):
    """Integrating out of the asymptotic past amplifies errors like exp(|xi|).

    The A-channel amplitude of phi starts near exp(-|xi|) and grows to order
    one, so a relative error of the tolerance at xi = -20 ends up
    multiplied by about e^20 ~ 5e8 on the way to xi = +20. The
    scattering check therefore starts at a moderate time and integrates
    outwards in both directions instead.
    """
    ts = np.array([-20.0, 20.0])
    psi_a, phi_a = _pairs(ref_spec, ts)
    cfg = IntegratorConfig(abs_tol=1e-12, rel_tol=1e-12)
    naive = integrate(psi_a[0], phi_a[0], ref_spec.H, ref_spec.g, (-20, 20), cfg, ts)
    naive_err = np.linalg.norm(naive.psi[-1] - psi_a[-1])
    start = _pairs(ref_spec, [-2.0])
    out = integrate(start[0][0], start[1][0], ref_spec.H, ref_spec.g, (-2, 20), cfg, [-2.0, 20.0])
    outward_err = np.linalg.norm(out.psi[-1] - psi_a[-1])
    assert naive_err > 1e-6
    assert outward_err < 1e-7
