"""Finite-dimensional Hilbert-space arithmetic.

State vectors, Hermitian operators with a cached spectral decomposition,
linear Schrodinger evolution, and the pair observables used throughout the
package: norm sum ``N``, norm difference ``tau``, overlap ``gamma``,
``delta = |gamma|^2``, the density matrix, its purity and the Schwarz
parameter.

Units are dimensionless with hbar = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, DegenerateInputError

HERMITICITY_RTOL = 1e-10
DEFAULT_BASIS = "standard"


def _frozen(arr):
    arr = np.array(arr, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateVector:
    """Complex amplitude vector tied to a basis label."""

    amplitudes: np.ndarray
    basis_tag: str = DEFAULT_BASIS

    def __post_init__(self):
        amps = np.atleast_1d(np.asarray(self.amplitudes, dtype=np.complex128))
        if amps.ndim != 1 or amps.size < 1:
            raise ContractViolation("state vector must be a non-empty 1-d array")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    def __len__(self):
        return self.amplitudes.size

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def as_state(v, basis_tag: str = DEFAULT_BASIS) -> StateVector:
    if isinstance(v, StateVector):
        return v
    return StateVector(v, basis_tag)


def _amps(v) -> np.ndarray:
    return v.amplitudes if isinstance(v, StateVector) else np.asarray(v, dtype=np.complex128)


def _check_pair(u, v):
    if isinstance(u, StateVector) and isinstance(v, StateVector) and u.basis_tag != v.basis_tag:
        raise ContractViolation(f"basis mismatch: {u.basis_tag!r} vs {v.basis_tag!r}")
    a, b = _amps(u), _amps(v)
    if a.shape != b.shape:
        raise ContractViolation(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


@dataclass(frozen=True)
class Coupling:
    """Complex coupling constant ``g = a + i b`` (energy units)."""

    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ContractViolation("coupling must be finite")

    @classmethod
    def from_complex(cls, g: complex) -> "Coupling":
        g = complex(g)
        return cls(g.real, g.imag)

    @property
    def g(self) -> complex:
        return complex(self.a, self.b)

    def conj(self) -> "Coupling":
        return Coupling(self.a, -self.b)


class HermitianOperator:
    """Dense Hermitian matrix with its eigendecomposition computed once.

    Eigenvalues are ascending. Each eigenvector column is rotated so that its
    first component with modulus above 1e-12 is real and positive, which
    makes fixtures reproducible across LAPACK builds.

    Parameters
    ----------
    matrix : array_like
        Square complex matrix. Accepted if
        ``max|M - M^H| <= 1e-10 * max|M|``; the stored matrix is the
        symmetrised ``(M + M^H)/2``.
    basis_tag : str
        Label of the basis in which ``matrix`` is written.
    """

    def __init__(self, matrix, basis_tag: str = DEFAULT_BASIS):
        m = np.array(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ContractViolation(f"operator must be a non-empty square matrix, got {m.shape}")
        scale = np.max(np.abs(m)) if m.size else 0.0
        asym = np.max(np.abs(m - m.conj().T))
        if asym > HERMITICITY_RTOL * scale:
            raise ContractViolation(f"matrix is not Hermitian (max|M - M^H| = {asym:.3e})")
        m = 0.5 * (m + m.conj().T)
        evals, evecs = np.linalg.eigh(m)
        for j in range(evecs.shape[1]):
            col = evecs[:, j]
            idx = np.flatnonzero(np.abs(col) > 1e-12)[0]
            evecs[:, j] = col * (abs(col[idx]) / col[idx])
        self.basis_tag = basis_tag
        self._matrix = _frozen(m)
        self._eigenvalues = np.asarray(evals, dtype=float)
        self._eigenvalues.setflags(write=False)
        self._eigenvectors = _frozen(evecs)

    @classmethod
    def diagonal(cls, energies, basis_tag: str = DEFAULT_BASIS) -> "HermitianOperator":
        return cls(np.diag(np.asarray(energies, dtype=float)), basis_tag)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eigenvalues

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._eigenvectors

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def propagator(self, t: float) -> np.ndarray:
        """``exp(-i H t)`` assembled from the spectral form."""
        u = self._eigenvectors
        return (u * np.exp(-1j * self._eigenvalues * t)) @ u.conj().T

    def to_eigenbasis(self, v) -> np.ndarray:
        return self._eigenvectors.conj().T @ _amps(v)

    def from_eigenbasis(self, coeffs) -> np.ndarray:
        return self._eigenvectors @ np.asarray(coeffs, dtype=np.complex128)

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim}, E={np.array2string(self._eigenvalues, precision=4)})"


@dataclass(frozen=True)
class ReducedState:
    """The H-independent scalars of a state pair.

    ``N = <psi|psi> + <phi|phi>``, ``tau = <psi|psi> - <phi|phi>``,
    ``gamma = <phi|psi>`` and ``delta = |gamma|^2``.
    """

    N: float
    tau: float
    gamma: complex
    delta: float

    @classmethod
    def from_scalars(cls, N, tau, gamma) -> "ReducedState":
        gamma = complex(gamma)
        return cls(float(N), float(tau), gamma, (gamma.conjugate() * gamma).real)

    @property
    def omega0_sq(self) -> float:
        return 0.25 * self.tau**2 + self.delta


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace Hermitian positive semidefinite matrix."""

    matrix: np.ndarray
    atol: float = field(default=1e-10, compare=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ContractViolation("density matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > self.atol:
            raise ContractViolation("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > self.atol:
            raise ContractViolation(f"density matrix trace is {np.trace(m).real:.12g}, expected 1")
        if np.linalg.eigvalsh(m).min() < -self.atol:
            raise ContractViolation("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def inner_product(u, v) -> complex:
    """``<u|v> = sum_k conj(u_k) v_k``."""
    a, b = _check_pair(u, v)
    return complex(np.vdot(a, b))


def reduced_observables(psi, phi) -> ReducedState:
    a, b = _check_pair(psi, phi)
    npsi = np.vdot(a, a).real
    nphi = np.vdot(b, b).real
    return ReducedState.from_scalars(npsi + nphi, npsi - nphi, np.vdot(b, a))


def density_matrix(psi, phi) -> DensityMatrix:
    """``rho = (|psi><psi| + |phi><phi|) / N``.

    Raises
    ------
    DegenerateInputError
        If both vectors vanish.
    """
    a, b = _check_pair(psi, phi)
    n = np.vdot(a, a).real + np.vdot(b, b).real
    if n <= 0.0:
        raise DegenerateInputError("density matrix undefined for N = 0")
    rho = (np.outer(a, a.conj()) + np.outer(b, b.conj())) / n
    return DensityMatrix(rho)


def schwarz_parameter(psi, phi) -> float:
    """``<psi|psi><phi|phi> - |<psi|phi>|^2``; zero iff the pair is proportional."""
    a, b = _check_pair(psi, phi)
    return float(np.vdot(a, a).real * np.vdot(b, b).real - abs(np.vdot(a, b)) ** 2)


def purity(rho: DensityMatrix) -> float:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(m) ** 2))


def evolve_linear(H: HermitianOperator, v0, t: float) -> StateVector:
    """Solve ``i dv/dt = H v`` exactly: ``U exp(-i E t) U^H v0``."""
    amps = _amps(v0)
    if amps.shape != (H.dim,):
        raise ContractViolation(f"state dimension {amps.shape} does not match H ({H.dim})")
    tag = v0.basis_tag if isinstance(v0, StateVector) else H.basis_tag
    if t == 0:
        return StateVector(amps.copy(), tag)
    coeffs = H.to_eigenbasis(amps) * np.exp(-1j * H.eigenvalues * t)
    return StateVector(H.from_eigenbasis(coeffs), tag)


def random_hermitian(dim: int, seed: int) -> HermitianOperator:
    """Reproducible random Hermitian operator, ``(M + M^H)/2`` with Gaussian ``M``."""
    if dim < 1:
        raise ContractViolation("dim must be >= 1")
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator(0.5 * (m + m.conj().T))


def random_state(dim: int, rng) -> StateVector:
    rng = np.random.default_rng(rng)
    return StateVector(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
