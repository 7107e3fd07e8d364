import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from nlqm.analytic import state_pair_at
from nlqm.errors import ContractViolation, DegenerateInputError
from nlqm.hilbert import (Coupling, DensityMatrix, HermitianOperator, StateVector, density_matrix, evolve_linear,
                          inner_product, purity, random_hermitian, random_state, reduced_observables,
                          schwarz_parameter)

s2 = math.sqrt(2)


@pytest.mark.parametrize("u, v, expected", [
    ((1, 0), (1, 0), 1.0),
    ((1, 0), (0, 1), 0.0),
    ((1j, 0), (1, 0), -1j),
])
def test_inner_product_examples(u, v, expected):
    assert inner_product(u, v) == pytest.approx(expected)


def test_inner_product_conjugate_symmetry():
    u = np.array([1, 1j]) / s2
    v = np.array([1, -1j]) / s2
    assert inner_product(u, v) == pytest.approx(np.conj(inner_product(v, u)))


def test_inner_product_rejects_mismatch():
    with pytest.raises(ContractViolation):
        inner_product((1, 0), (1, 0, 0))
    with pytest.raises(ContractViolation):
        inner_product(StateVector([1, 0], "a"), StateVector([1, 0], "b"))


@pytest.mark.parametrize("psi, phi, N, tau, gamma", [
    ((1, 0), (0, 1), 2, 0, 0),
    ((1, 0), (1, 0), 2, 0, 1),
    ((2, 0), (0, 1), 5, 3, 0),
])
def test_reduced_observables_examples(psi, phi, N, tau, gamma):
    r = reduced_observables(psi, phi)
    assert (r.N, r.tau, r.gamma, r.delta) == pytest.approx((N, tau, gamma, abs(gamma) ** 2))


def test_reduced_observables_on_closed_form_at_t0():
    from nlqm.analytic import spec_from_directions

    H = random_hermitian(3, 0)
    spec = spec_from_directions(H, [1, 0, 0], [0, 1, 0], 1.0, 0.3, 0.0, Coupling(1.0, 0.5))
    r = reduced_observables(*state_pair_at(spec, 0.0))
    assert r.gamma == pytest.approx(1.0, abs=1e-12)
    assert r.delta == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("psi, phi, rho", [
    ((1, 0), (0, 0), np.diag([1, 0])),
    ((1, 0), (0, 1), np.diag([0.5, 0.5])),
])
def test_density_matrix_examples(psi, phi, rho):
    np.testing.assert_allclose(density_matrix(psi, phi).matrix, rho, atol=1e-15)


def test_density_matrix_zero_pair():
    with pytest.raises(DegenerateInputError):
        density_matrix((0, 0), (0, 0))


def test_density_matrix_eigenstructure_on_closed_form(ref_spec):
    sh2, ch2 = math.sinh(0.3) ** 2, math.cosh(0.3) ** 2
    for t in (-1.5, 0.0, 2.2):
        rho = density_matrix(*state_pair_at(ref_spec, t))
        ev = rho.eigenvalues
        np.testing.assert_allclose(ev[:2], 0.0, atol=1e-12)
        np.testing.assert_allclose(ev[2:], np.array([sh2, ch2]) / math.cosh(0.6), atol=1e-12)
        # eigenvectors are the freely evolving A and B directions
        a, b = ref_spec.A_state(t).amplitudes, ref_spec.B_state(t).amplitudes
        rho_m = rho.matrix
        np.testing.assert_allclose(rho_m @ a, ev[2] * a, atol=1e-12)
        np.testing.assert_allclose(rho_m @ b, ev[3] * b, atol=1e-12)


@pytest.mark.parametrize("bad", [
    np.array([[1, 1], [0, 0]]),           # not Hermitian
    np.diag([0.5, 0.4]),                  # trace != 1
    np.diag([1.5, -0.5]),                 # negative eigenvalue
])
def test_density_matrix_contract(bad):
    with pytest.raises(ContractViolation):
        DensityMatrix(bad)


@pytest.mark.parametrize("psi, phi, expected", [
    ((1, 0), (2, 0), 0.0),
    ((1, 0), (0, 1), 1.0),
])
def test_schwarz_examples(psi, phi, expected):
    assert schwarz_parameter(psi, phi) == pytest.approx(expected)


def test_schwarz_on_closed_form(ref_spec):
    expected = 4 * math.sinh(0.3) ** 2 * math.cosh(0.3) ** 2
    for t in (-2.0, 0.5):
        assert schwarz_parameter(*state_pair_at(ref_spec, t)) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("rho, expected", [(np.diag([1, 0]), 1.0), (np.diag([0.5, 0.5]), 0.5)])
def test_purity_examples(rho, expected):
    assert purity(DensityMatrix(rho)) == pytest.approx(expected)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**31 - 1))
def test_purity_schwarz_identity(dim, seed):
    rng = np.random.default_rng(seed)
    psi, phi = random_state(dim, rng), random_state(dim, rng)
    n = psi.norm_sq + phi.norm_sq
    rho = density_matrix(psi, phi)
    assert purity(rho) == pytest.approx(1 - 2 * schwarz_parameter(psi, phi) / n**2, abs=1e-12)
    assert schwarz_parameter(psi, phi) >= -1e-12


def test_evolve_linear_identity_at_zero():
    H = random_hermitian(3, 1)
    v0 = np.array([0.3, 1j, -0.2])
    np.testing.assert_array_equal(evolve_linear(H, v0, 0.0).amplitudes, v0)


def test_evolve_linear_phase():
    H = HermitianOperator.diagonal([0.0, 1.0])
    np.testing.assert_allclose(evolve_linear(H, [0, 1], math.pi).amplitudes, [0, -1], atol=1e-15)


def test_evolve_linear_against_expm():
    H = random_hermitian(4, 42)
    v0 = random_state(4, 3).amplitudes
    v = evolve_linear(H, v0, 1.7).amplitudes
    ref = scipy.linalg.expm(-1j * 1.7 * H.matrix) @ v0
    np.testing.assert_allclose(v, ref, atol=1e-12)
    assert abs(np.vdot(v, v).real - np.vdot(v0, v0).real) < 1e-12


def test_random_hermitian_properties():
    assert random_hermitian(1, 5).eigenvalues.shape == (1,)
    np.testing.assert_array_equal(random_hermitian(4, 42).matrix, random_hermitian(4, 42).matrix)
    m = random_hermitian(8, 7).matrix
    assert np.max(np.abs(m - m.conj().T)) == 0.0
    with pytest.raises(ContractViolation):
        random_hermitian(0, 1)


def test_hermitian_operator_rejects_non_hermitian():
    with pytest.raises(ContractViolation):
        HermitianOperator([[0, 1], [0, 0]])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**31 - 1))
def test_eigenbasis_round_trip(dim, seed):
    H = random_hermitian(dim, seed)
    v = random_state(dim, seed + 1).amplitudes
    np.testing.assert_allclose(H.from_eigenbasis(H.to_eigenbasis(v)), v, atol=1e-12)
    np.testing.assert_allclose(H.matrix @ H.eigenvectors, H.eigenvectors * H.eigenvalues, atol=1e-12)
    assert np.all(np.diff(H.eigenvalues) >= 0)


def test_coupling():
    g = Coupling(1.0, 0.5)
    assert g.g == 1 + 0.5j
    assert g.conj().g == 1 - 0.5j
    assert Coupling.from_complex(2 - 1j) == Coupling(2.0, -1.0)
