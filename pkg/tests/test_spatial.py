import math

import numpy as np
import pytest

from nlqm.analytic import spec_from_directions, state_pair_at
from nlqm.errors import ContractViolation, IntegrationError
from nlqm.hilbert import Coupling
from nlqm.reduced import gamma_analytic
from nlqm.spatial import (Grid1D, WaveFunction1D, embed, evolve_pair_splitstep, gaussian, gaussian_width,
                          harmonic_potential, hermite_gaussian, overlap, plane_wave_modes, position_spread)

GRID = Grid1D(-10.0, 10.0, 256)


def test_grid():
    assert GRID.dx == pytest.approx(20 / 256)
    assert GRID.x[0] == -10.0 and GRID.x.size == 256
    assert np.max(np.abs(GRID.k)) == pytest.approx(math.pi / GRID.dx)


@pytest.mark.parametrize("args", [(0.0, 0.0, 64), (0.0, 1.0, 100), (0.0, 1.0, 4)])
def test_grid_contract(args):
    with pytest.raises(ContractViolation):
        Grid1D(*args)


def test_gaussian_self_overlap():
    g = gaussian(GRID, 0.5, 1.2, 0.7)
    assert overlap(g, g) == pytest.approx(1.0, abs=1e-10)


def test_hermite_parity_overlap():
    h0, h1 = hermite_gaussian(GRID, 0), hermite_gaussian(GRID, 1)
    assert abs(overlap(h0, h1)) < 1e-10
    assert overlap(h1, h1) == pytest.approx(1.0, abs=1e-10)


def test_overlap_grid_refinement():
    fine = Grid1D(-10.0, 10.0, 512)
    a, b = gaussian(GRID, 0.3, 1.0, 1.0), gaussian(GRID, -0.4, 0.8)
    af, bf = gaussian(fine, 0.3, 1.0, 1.0), gaussian(fine, -0.4, 0.8)
    assert abs(overlap(a, b) - overlap(af, bf)) < 1e-10


def test_overlap_grid_mismatch():
    with pytest.raises(ContractViolation):
        overlap(gaussian(GRID), gaussian(Grid1D(-10.0, 10.0, 128)))


def test_wavefunction_contract():
    with pytest.raises(ContractViolation):
        WaveFunction1D(GRID, np.zeros(10))
    with pytest.raises(ContractViolation):
        WaveFunction1D(GRID, np.full(256, np.nan))


def test_free_gaussian_width_law():
    grid = Grid1D(-40.0, 40.0, 1024)
    psi = gaussian(grid, 0.0, 1.0)
    phi = gaussian(grid, 0.0, 1.0, 0.0)
    tr = evolve_pair_splitstep(psi, phi, Coupling(0.0, 0.0), (0.0, 2.0), 1e-2)
    assert position_spread(tr.psi_final) == pytest.approx(gaussian_width(2.0, 1.0), abs=1e-8)
    assert tr.psi_final.norm_sq == pytest.approx(1.0, abs=1e-12)


def test_orthogonal_packets_stay_orthogonal():
    psi, phi = hermite_gaussian(GRID, 0, omega=0.8), hermite_gaussian(GRID, 1, omega=0.8)
    tr = evolve_pair_splitstep(psi, phi, Coupling(1.0, 0.5), (0.0, 1.0), 1e-3)
    assert np.max(np.abs(tr.gamma)) < 1e-8


def test_plane_wave_modes():
    basis, H = plane_wave_modes(GRID, [2, -1, 5, -3])
    gram = basis.conj().T @ basis * GRID.dx
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-12)
    assert np.all(np.diff(H.eigenvalues) >= 0)
    with pytest.raises(ContractViolation):
        plane_wave_modes(GRID, [1, 1])
    with pytest.raises(ContractViolation):
        plane_wave_modes(GRID, [200])


def test_analytic_manifold_gamma_tracks_sech():
    basis, H = plane_wave_modes(GRID, [-3, -1, 2, 5])
    s3 = 1 / math.sqrt(3)
    A = np.array([1, 1j, 1, 0]) * s3
    B = np.array([1j, 1, 0, 1]) * s3
    spec = spec_from_directions(H, A, B, 1.0, 0.3, 0.0, Coupling(1.0, 0.5))
    p0, f0 = state_pair_at(spec, 0.0)
    tr = evolve_pair_splitstep(embed(GRID, basis, p0.amplitudes), embed(GRID, basis, f0.amplitudes), spec.g,
                               (0.0, 2.0), 1e-3)
    sech = 1.0 / np.cosh(tr.times)
    assert np.max(np.abs(np.abs(tr.gamma) - sech)) < 1e-4
    assert np.max(np.abs(tr.gamma - gamma_analytic(spec.reduced_params, tr.times))) < 1e-4
    assert np.max(np.abs(tr.N - tr.N[0])) < 1e-6


def test_snapshots_and_potential():
    psi, phi = gaussian(GRID, -1.0, 0.7), gaussian(GRID, 1.0, 0.7)
    tr = evolve_pair_splitstep(psi, phi, Coupling(0.5, 0.2), (0.0, 0.1), 1e-2,
                               potential=harmonic_potential(GRID, 1.0), snapshot_every=5)
    assert [round(t, 12) for t, _, _ in tr.snapshots] == [0.0, 0.05, 0.1]
    assert tr.times.size == 11
    np.testing.assert_allclose(tr.omega0_sq, tr.omega0_sq[0], atol=1e-10)


def test_evolve_contract():
    psi = gaussian(GRID)
    with pytest.raises(ContractViolation):
        evolve_pair_splitstep(psi, gaussian(Grid1D(-5.0, 5.0, 256)), Coupling(1.0, 0.0), (0, 1), 0.1)
    with pytest.raises(ContractViolation):
        evolve_pair_splitstep(psi, psi, Coupling(1.0, 0.0), (1, 0), 0.1)
    with pytest.raises(ContractViolation):
        evolve_pair_splitstep(psi, psi, Coupling(1.0, 0.0), (0, 1), 0.1, potential=np.zeros(3))


def test_non_finite_reports_last_good_time():
    big = WaveFunction1D(GRID, gaussian(GRID).values * 1e150)
    with pytest.raises(IntegrationError) as exc:
        evolve_pair_splitstep(big, big, Coupling(1.0, 0.0), (0.0, 1.0), 0.1)
    assert exc.value.last_good_time >= 0.0
