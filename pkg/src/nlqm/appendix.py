"""Special cases: a single self-coupled state, and the two-state pair with real g.

Single state, ``i psi' = H psi + g <psi|psi> psi``:

* real ``g``: the norm ``N0`` is conserved and the solution is linear
  evolution times the global phase ``exp(-i g N0 t)``;
* complex ``g = a + i b``: the norm obeys ``d<psi|psi>/dt = 2 b <psi|psi>^2``,
  solved by ``-1 / (2 b (t - t0))`` on the window ``2 b (t - t0) < 0``.

Pair with real ``g`` (``b = 0``): ``tau`` and ``delta`` are constants and
``gamma = gamma0 exp(i g tau0 t)``; the closed form uses
``k = sqrt(delta0) / (w0 + tau0/2) = (w0 - tau0/2) / sqrt(delta0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, ExistenceWindowError, ValidationError, WrongCaseError
from .hilbert import Coupling, HermitianOperator, StateVector, _amps
from .stepper import IntegratorConfig, solve

SPEC_ATOL = 1e-10


@dataclass(frozen=True)
class SingleVectorSpec:
    c_coeffs: np.ndarray
    g: Coupling
    H: HermitianOperator
    t0: float = 0.0

    def __post_init__(self):
        c = np.array(self.c_coeffs, dtype=np.complex128)
        if c.shape != (self.H.dim,):
            raise ContractViolation(f"c_coeffs must have length {self.H.dim}")
        if not np.vdot(c, c).real > 0:
            raise ContractViolation("sum |c_n|^2 must be positive")
        c.setflags(write=False)
        object.__setattr__(self, "c_coeffs", c)

    @property
    def N0(self) -> float:
        return float(np.vdot(self.c_coeffs, self.c_coeffs).real)


def single_vector_real_g(spec: SingleVectorSpec, t: float) -> StateVector:
    """``sum_n c_n exp(-i (E_n + g N0)(t - t0)) |n>`` in the basis of ``H.matrix``.

    Raises
    ------
    WrongCaseError
        If the coupling has an imaginary part; use
        :func:`single_vector_complex_g_norm` then.
    """
    if spec.g.b != 0:
        raise WrongCaseError("b != 0: the norm is not conserved; use single_vector_complex_g_norm")
    dt = t - spec.t0
    phases = np.exp(-1j * (spec.H.eigenvalues + spec.g.a * spec.N0) * dt)
    return StateVector(spec.H.from_eigenbasis(spec.c_coeffs * phases), spec.H.basis_tag)


def single_vector_complex_g_norm(b: float, t0: float, t: float) -> float:
    """Norm ``-1 / (2 b (t - t0))`` of a self-coupled state with ``Im g = b``.

    Raises
    ------
    ExistenceWindowError
        When ``2 b (t - t0) >= 0``: for ``b > 0`` the state no longer exists
        after ``t0``, for ``b < 0`` it does not exist before ``t0``.
    """
    if b == 0:
        raise WrongCaseError("b = 0: norm is constant; use single_vector_real_g")
    x = 2.0 * b * (t - t0)
    if x >= 0:
        side = "after" if b > 0 else "before"
        raise ExistenceWindowError(f"no solution at t={t}: with b={b} the state does not exist {side} t0={t0}")
    return -1.0 / x


@dataclass(frozen=True)
class SingleTrajectory:
    times: np.ndarray
    psi: np.ndarray

    @property
    def norm_sq(self):
        return np.einsum("ij,ij->i", self.psi.conj(), self.psi).real


def integrate_single(psi0, H: HermitianOperator, g: Coupling, t_span, config: IntegratorConfig | None = None,
                     t_eval=None) -> SingleTrajectory:
    """Numerically integrate ``i psi' = H psi + g <psi|psi> psi``."""
    a = _amps(psi0)
    if a.shape != (H.dim,):
        raise ContractViolation(f"state dimension {a.shape} does not match H ({H.dim})")
    h, gc = H.matrix, g.g

    def rhs(t, y):
        return -1j * (h @ y + gc * np.vdot(y, y).real * y)

    times, ys, _ = solve(rhs, t_span, a, config or IntegratorConfig(), t_eval)
    return SingleTrajectory(times, ys)


def real_g_k(tau0: float, delta0: float):
    """Both printed forms of ``k``; returns ``(k1, k2)`` with ``w0 = +sqrt(tau0^2/4 + delta0)``."""
    if not delta0 > 0:
        raise ContractViolation("delta0 must be positive")
    w0 = math.sqrt(0.25 * tau0 * tau0 + delta0)
    sd = math.sqrt(delta0)
    return sd / (w0 + 0.5 * tau0), (w0 - 0.5 * tau0) / sd


@dataclass(frozen=True)
class RealGSpec:
    """Closed-form pair for real coupling ``g_real``.

    ``A_coeffs`` and ``B_coeffs`` are eigenbasis coefficients. They must be
    orthogonal and satisfy ``sum(k |B_n|^2 - |A_n|^2 / k) = 1``.
    """

    A_coeffs: np.ndarray
    B_coeffs: np.ndarray
    tau0: float
    delta0: float
    gamma0: complex
    g_real: float
    H: HermitianOperator

    def __post_init__(self):
        for name in ("A_coeffs", "B_coeffs"):
            arr = np.array(getattr(self, name), dtype=np.complex128)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "gamma0", complex(self.gamma0))

    @property
    def omega0(self) -> float:
        return math.sqrt(0.25 * self.tau0**2 + self.delta0)

    @property
    def k(self) -> float:
        return real_g_k(self.tau0, self.delta0)[0]

    @property
    def period(self) -> float:
        """Period ``2 pi / (g w0)`` of the interaction-picture dynamics."""
        return 2.0 * math.pi / abs(self.g_real * self.omega0)


def validate_real_g_spec(spec: RealGSpec, atol: float = SPEC_ATOL) -> RealGSpec:
    d = spec.H.dim
    if spec.A_coeffs.shape != (d,) or spec.B_coeffs.shape != (d,):
        raise ContractViolation(f"coefficient vectors must have length {d}")
    if not spec.delta0 > 0:
        raise ContractViolation("delta0 must be positive")
    res = abs(abs(spec.gamma0) ** 2 - spec.delta0)
    if res > atol * max(1.0, spec.delta0):
        raise ValidationError("|gamma0|^2 = delta0", res)
    res = abs(np.vdot(spec.B_coeffs, spec.A_coeffs))
    if res > atol:
        raise ValidationError("orthogonality sum_n B_n^* A_n = 0", res)
    k = spec.k
    res = abs(k * np.vdot(spec.B_coeffs, spec.B_coeffs).real - np.vdot(spec.A_coeffs, spec.A_coeffs).real / k - 1)
    if res > atol:
        raise ValidationError("normalization sum(k|B|^2 - |A|^2/k) = 1", res)
    return spec


def real_g_spec(a_dir, b_dir, tau0: float, gamma0: complex, g_real: float, H: HermitianOperator,
                a_weight: float = 0.5) -> RealGSpec:
    """Build a valid :class:`RealGSpec` from two orthonormal eigenbasis directions.

    ``A = a_weight * a_dir`` and ``B`` is ``b_dir`` scaled so that the
    normalization constraint holds.
    """
    gamma0 = complex(gamma0)
    delta0 = abs(gamma0) ** 2
    k, _ = real_g_k(tau0, delta0)
    a_dir, b_dir = np.asarray(a_dir, dtype=np.complex128), np.asarray(b_dir, dtype=np.complex128)
    y = (1.0 + a_weight**2 / k) / k
    spec = RealGSpec(a_weight * a_dir, math.sqrt(y) * b_dir, tau0, delta0, gamma0, g_real, H)
    return validate_real_g_spec(spec)


def real_g_state_pair(spec: RealGSpec, t: float):
    """Evaluate the real-g closed form at ``t`` in the basis of ``H.matrix``."""
    validate_real_g_spec(spec)
    g, w0, k = spec.g_real, spec.omega0, spec.k
    # sqrt(gamma) continued from the principal root of gamma0
    half = 0.5 * (np.angle(spec.gamma0) + g * spec.tau0 * t)
    s = math.sqrt(abs(spec.gamma0)) * complex(math.cos(half), math.sin(half))
    ep, em = np.exp(1j * g * w0 * t), np.exp(-1j * g * w0 * t)
    free = np.exp(-1j * spec.H.eigenvalues * t)
    psi_hat = spec.A_coeffs * ep + spec.B_coeffs * em
    phi_hat = -spec.A_coeffs / k * ep + k * spec.B_coeffs * em
    tag = spec.H.basis_tag
    psi = StateVector(spec.H.from_eigenbasis(s * psi_hat * free), tag)
    phi = StateVector(spec.H.from_eigenbasis(s.conjugate() * phi_hat * free), tag)
    return psi, phi


def real_g_gamma(spec: RealGSpec, t):
    return spec.gamma0 * np.exp(1j * spec.g_real * spec.tau0 * np.asarray(t, dtype=float))
