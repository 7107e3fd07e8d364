"""Position-space solver for the pair with a free (optionally trapped) Hamiltonian.

    i psi_t = -1/2 psi_xx + V psi + g   [int phi^* psi dx] phi
    i phi_t = -1/2 phi_xx + V phi + g^* [int psi^* phi dx] psi

on a periodic grid. One Strang step is a kinetic half step (exact in Fourier
space), a full step of potential plus nonlocal coupling, and a second
kinetic half step. The coupling substep is one RK4 step of the 2-channel
system with the overlap re-evaluated at every stage; a potential, if given,
is split symmetrically around it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.hermite import hermval

from .errors import ContractViolation, IntegrationError
from .hilbert import Coupling, HermitianOperator


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ContractViolation("x_max must exceed x_min")
        n = int(self.n_points)
        if n < 8 or n & (n - 1):
            raise ContractViolation("n_points must be a power of two >= 8")

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.n_points

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)


@dataclass(frozen=True)
class WaveFunction1D:
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128)
        if v.shape != (self.grid.n_points,):
            raise ContractViolation("values must match the grid size")
        if not np.all(np.isfinite(v)):
            raise ContractViolation("wave function has non-finite samples")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.dx)


def overlap(phi: WaveFunction1D, psi: WaveFunction1D) -> complex:
    """``int phi^* psi dx`` by the rectangle rule (trapezoidal on a periodic grid)."""
    if phi.grid != psi.grid:
        raise ContractViolation("wave functions live on different grids")
    return complex(np.vdot(phi.values, psi.values) * phi.grid.dx)


def gaussian(grid: Grid1D, x0: float = 0.0, sigma: float = 1.0, k0: float = 0.0) -> WaveFunction1D:
    """Normalized Gaussian packet with position spread ``sigma`` (std of ``|psi|^2``)."""
    x = grid.x
    v = (2 * np.pi * sigma**2) ** -0.25 * np.exp(-((x - x0) ** 2) / (4 * sigma**2) + 1j * k0 * x)
    return WaveFunction1D(grid, v)


def hermite_gaussian(grid: Grid1D, n: int, x0: float = 0.0, omega: float = 1.0) -> WaveFunction1D:
    """Harmonic-oscillator eigenfunction ``n`` (units hbar = m = 1)."""
    xi = math.sqrt(omega) * (grid.x - x0)
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    norm = (omega / math.pi) ** 0.25 / math.sqrt(2.0**n * math.factorial(n))
    return WaveFunction1D(grid, norm * hermval(xi, coeffs) * np.exp(-0.5 * xi * xi))


def gaussian_width(t: float, sigma0: float) -> float:
    """Position spread of a free Gaussian: ``sigma0 sqrt(1 + (t / (2 sigma0^2))^2)``."""
    return sigma0 * math.sqrt(1.0 + (t / (2.0 * sigma0**2)) ** 2)


def position_spread(wf: WaveFunction1D) -> float:
    p = np.abs(wf.values) ** 2
    p = p / p.sum()
    x = wf.grid.x
    mean = np.sum(p * x)
    return float(math.sqrt(np.sum(p * (x - mean) ** 2)))


def plane_wave_modes(grid: Grid1D, mode_numbers):
    """Plane waves ``exp(i k_m x) / sqrt(L)`` with ``k_m = 2 pi m / L``.

    Returns ``(basis, hamiltonian)``: ``basis`` has one grid-sampled mode per
    column (orthonormal under :func:`overlap`); ``hamiltonian`` is the free
    Hamiltonian restricted to those modes, diagonal with entries ``k_m^2 / 2``.
    Each mode is an exact eigenfunction of the spectral kinetic operator.
    """
    m = np.asarray(mode_numbers, dtype=int)
    if len(set(m.tolist())) != m.size:
        raise ContractViolation("mode numbers must be distinct")
    if np.any(np.abs(m) >= grid.n_points // 2):
        raise ContractViolation("mode numbers exceed the grid Nyquist limit")
    k = 2 * np.pi * m / grid.length
    basis = np.exp(1j * np.outer(grid.x - grid.x_min, k)) / math.sqrt(grid.length)
    # ordering by energy keeps the diagonal H in eigenvalue order
    order = np.argsort(0.5 * k * k, kind="stable")
    return basis[:, order], HermitianOperator.diagonal(0.5 * k[order] ** 2, basis_tag="plane_waves")


def embed(grid: Grid1D, basis: np.ndarray, coeffs) -> WaveFunction1D:
    return WaveFunction1D(grid, basis @ np.asarray(coeffs, dtype=np.complex128))


@dataclass(frozen=True)
class SpatialTrajectory:
    """Observables per recorded step plus the final (and optionally sampled) fields."""

    times: np.ndarray
    gamma: np.ndarray
    N: np.ndarray
    tau: np.ndarray
    psi_final: WaveFunction1D
    phi_final: WaveFunction1D
    snapshots: list = field(default_factory=list)

    @property
    def delta(self):
        return np.abs(self.gamma) ** 2

    @property
    def omega0_sq(self):
        return 0.25 * self.tau**2 + self.delta


def evolve_pair_splitstep(psi0: WaveFunction1D, phi0: WaveFunction1D, g: Coupling, t_span, dt: float,
                          potential=None, snapshot_every: int = 0) -> SpatialTrajectory:
    """Strang split-step evolution of the spatial pair.

    ``dt`` is shrunk slightly if needed so that an integer number of steps
    covers ``t_span``. Observables are recorded at every step; fields are
    stored every ``snapshot_every`` steps when that is positive.

    Raises
    ------
    IntegrationError
        If the fields become non-finite.
    """
    grid = psi0.grid
    if phi0.grid != grid:
        raise ContractViolation("psi0 and phi0 must share a grid")
    if not dt > 0:
        raise ContractViolation("dt must be positive")
    t0, t1 = map(float, t_span)
    if not t1 > t0:
        raise ContractViolation("t_span must be increasing")
    n_steps = max(1, math.ceil((t1 - t0) / dt - 1e-9))
    h = (t1 - t0) / n_steps
    dx = grid.dx
    kin_half = np.exp(-0.25j * grid.k**2 * h)
    pot_half = None
    if potential is not None:
        v = np.asarray(potential, dtype=float)
        if v.shape != (grid.n_points,):
            raise ContractViolation("potential must be sampled on the grid")
        pot_half = np.exp(-0.5j * v * h)
    gc = g.g
    gcc = np.conj(gc)

    def coupling_rhs(p, f):
        gam = np.vdot(f, p) * dx
        return -1j * gc * gam * f, -1j * gcc * np.conj(gam) * p

    def coupling_step(p, f):
        k1p, k1f = coupling_rhs(p, f)
        k2p, k2f = coupling_rhs(p + 0.5 * h * k1p, f + 0.5 * h * k1f)
        k3p, k3f = coupling_rhs(p + 0.5 * h * k2p, f + 0.5 * h * k2f)
        k4p, k4f = coupling_rhs(p + h * k3p, f + h * k3f)
        return (p + (h / 6) * (k1p + 2 * k2p + 2 * k3p + k4p),
                f + (h / 6) * (k1f + 2 * k2f + 2 * k3f + k4f))

    p = np.array(psi0.values)
    f = np.array(phi0.values)
    times = t0 + h * np.arange(n_steps + 1)
    gam = np.empty(n_steps + 1, dtype=np.complex128)
    npsi = np.empty(n_steps + 1)
    nphi = np.empty(n_steps + 1)

    def record(i):
        gam[i] = np.vdot(f, p) * dx
        npsi[i] = np.vdot(p, p).real * dx
        nphi[i] = np.vdot(f, f).real * dx

    record(0)
    snaps = [(t0, WaveFunction1D(grid, p), WaveFunction1D(grid, f))] if snapshot_every > 0 else []
    # non-finite fields are detected below and raised as IntegrationError
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(1, n_steps + 1):
            p = np.fft.ifft(kin_half * np.fft.fft(p))
            f = np.fft.ifft(kin_half * np.fft.fft(f))
            if pot_half is not None:
                p, f = pot_half * p, pot_half * f
            p, f = coupling_step(p, f)
            if pot_half is not None:
                p, f = pot_half * p, pot_half * f
            p = np.fft.ifft(kin_half * np.fft.fft(p))
            f = np.fft.ifft(kin_half * np.fft.fft(f))
            if not (np.all(np.isfinite(p)) and np.all(np.isfinite(f))):
                raise IntegrationError("non-finite field", times[i - 1])
            record(i)
            if snapshot_every > 0 and i % snapshot_every == 0:
                snaps.append((times[i], WaveFunction1D(grid, p), WaveFunction1D(grid, f)))
    return SpatialTrajectory(times, gam, npsi + nphi, npsi - nphi,
                             WaveFunction1D(grid, p), WaveFunction1D(grid, f), snaps)


def harmonic_potential(grid: Grid1D, omega: float, x0: float = 0.0) -> np.ndarray:
    return 0.5 * omega**2 * (grid.x - x0) ** 2
