"""Closed-form state pairs, their asymptotics and the scattering matrix.

Given two orthonormal coefficient vectors ``A_n``, ``B_n`` in the eigenbasis
of ``H`` (so that ``|A(t)> = sum A_n exp(-i E_n t)|n>`` and likewise ``|B(t)>``
solve the linear equation), the pair

    psi = s     [ exp(+i g  w0 t) sinh(v) |A> + exp(-i g  w0 t) cosh(v) |B> ]
    phi = s^*   [-exp(+i g* w0 t) sinh(v) |A> + exp(-i g* w0 t) cosh(v) |B> ]

with ``s^2 = gamma(t)`` solves the nonlinear equations exactly, has
``N = 2 w0 cosh(2 v)`` and overlap ``<phi|psi> = gamma(t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, ValidationError
from .hilbert import (
    Coupling,
    DensityMatrix,
    HermitianOperator,
    StateVector,
    _amps,
    evolve_linear,
    inner_product,
)
from .reduced import ReducedParams, log_cosh

SPEC_ATOL = 1e-10
PAST, FUTURE = "past", "future"


def wrap_phase(theta: float) -> float:
    """Map an angle into (-pi, pi]."""
    w = math.atan2(math.sin(theta), math.cos(theta))
    return math.pi if w == -math.pi else w


@dataclass(frozen=True)
class AnalyticSolutionSpec:
    """Parameters of a closed-form solution.

    ``A_coeffs`` and ``B_coeffs`` are eigenbasis coefficients of ``H``; they
    must be normalized and mutually orthogonal (see :func:`validate_spec`).
    A negative ``vartheta`` is allowed and flips the sign of the A channel.
    """

    A_coeffs: np.ndarray
    B_coeffs: np.ndarray
    omega0: float
    vartheta: float
    theta: float
    g: Coupling
    H: HermitianOperator
    t0: float = 0.0

    def __post_init__(self):
        for name in ("A_coeffs", "B_coeffs"):
            arr = np.array(getattr(self, name), dtype=np.complex128)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def N(self) -> float:
        return 2.0 * self.omega0 * math.cosh(2.0 * self.vartheta)

    @property
    def theta_hat(self) -> float:
        """Asymptotic phase ``theta - (a/b) ln 2`` (theta taken in (-pi, pi])."""
        return wrap_phase(self.theta) - (self.g.a / self.g.b) * math.log(2.0)

    @property
    def reduced_params(self) -> ReducedParams:
        return ReducedParams(self.omega0, wrap_phase(self.theta), self.g, self.t0)

    def A_state(self, t: float) -> StateVector:
        return _free_state(self.H, self.A_coeffs, t)

    def B_state(self, t: float) -> StateVector:
        return _free_state(self.H, self.B_coeffs, t)


def _free_state(H, coeffs, t):
    return StateVector(H.from_eigenbasis(coeffs * np.exp(-1j * H.eigenvalues * t)), H.basis_tag)


def validate_spec(spec: AnalyticSolutionSpec, atol: float = SPEC_ATOL) -> AnalyticSolutionSpec:
    """Check normalization and orthogonality of ``A``/``B``; return the spec.

    Raises
    ------
    ValidationError
        Naming the failing constraint and its residual.
    """
    A, B = spec.A_coeffs, spec.B_coeffs
    d = spec.H.dim
    if A.shape != (d,) or B.shape != (d,):
        raise ContractViolation(f"coefficient vectors must have length {d}")
    if not spec.omega0 > 0:
        raise ContractViolation("omega0 must be positive")
    if spec.g.b == 0:
        raise ContractViolation("analytic solution needs b != 0; see appendix.real_g_state_pair")
    for name, v in (("normalization of A", A), ("normalization of B", B)):
        res = abs(np.vdot(v, v).real - 1.0)
        if res > atol:
            raise ValidationError(name, res)
    res = abs(np.vdot(B, A))
    if res > atol:
        raise ValidationError("orthogonality sum_n B_n^* A_n = 0", res)
    return spec


def _channel_factors(spec: AnalyticSolutionSpec, t: float):
    """Complex prefactors of |A> and |B> in psi and phi at time t.

    Magnitudes are assembled in the log domain so that large ``|xi|`` neither
    overflows ``cosh`` nor the growing exponentials.
    """
    w0, g = spec.omega0, spec.g
    tau = t - spec.t0
    xi = 2.0 * g.b * w0 * tau
    lc = float(log_cosh(xi))
    half_phase = 0.5 * (wrap_phase(spec.theta) + (g.a / g.b) * lc)
    sw = math.sqrt(w0)
    sh, ch = math.sinh(spec.vartheta), math.cosh(spec.vartheta)
    awt = g.a * w0 * tau

    def term(log_mag, phase):
        return sw * math.exp(log_mag) * complex(math.cos(phase), math.sin(phase))

    psi_a = sh * term(-0.5 * lc - 0.5 * xi, half_phase + awt)
    psi_b = ch * term(-0.5 * lc + 0.5 * xi, half_phase - awt)
    phi_a = -sh * term(-0.5 * lc + 0.5 * xi, -half_phase + awt)
    phi_b = ch * term(-0.5 * lc - 0.5 * xi, -half_phase - awt)
    return psi_a, psi_b, phi_a, phi_b


def state_pair_at(spec: AnalyticSolutionSpec, t: float):
    """Evaluate the closed-form pair ``(psi(t), phi(t))`` in the basis of ``H.matrix``.

    ``gamma^(1/2)`` is the principal root of ``w0 exp(i theta)`` at ``t0``,
    continued continuously in ``t``.
    """
    psi_a, psi_b, phi_a, phi_b = _channel_factors(spec, t)
    phases = np.exp(-1j * spec.H.eigenvalues * t)
    A, B = spec.A_coeffs * phases, spec.B_coeffs * phases
    psi = spec.H.from_eigenbasis(psi_a * A + psi_b * B)
    phi = spec.H.from_eigenbasis(phi_a * A + phi_b * B)
    tag = spec.H.basis_tag
    return StateVector(psi, tag), StateVector(phi, tag)


def interaction_picture(H: HermitianOperator, v, t: float) -> np.ndarray:
    """Eigenbasis coefficients of ``v`` with the free phases ``exp(-i E_n t)`` removed."""
    return H.to_eigenbasis(v) * np.exp(1j * H.eigenvalues * t)


@dataclass(frozen=True)
class AsymptoticPair:
    """Limiting interaction-picture coefficients of ``psi`` and ``phi``.

    ``psi`` and ``phi`` are eigenbasis coefficient vectors; ``psi_channel`` /
    ``phi_channel`` name which of A, B each one is proportional to, with
    complex weights ``psi_weight`` / ``phi_weight``.
    """

    direction: str
    psi: np.ndarray
    phi: np.ndarray
    psi_channel: str
    phi_channel: str
    psi_weight: complex
    phi_weight: complex
    theta_hat: float = field(default=0.0)


def asymptotic_pair(spec: AnalyticSolutionSpec, direction: str) -> AsymptoticPair:
    """Limit of the pair as ``t -> -inf`` (``"past"``) or ``t -> +inf`` (``"future"``).

    In terms of ``xi = 2 b w0 t`` the limits are fixed: as ``xi -> -inf``
    ``psi -> sqrt(2 w0) e^{i th/2} sinh(v) A`` and
    ``phi -> sqrt(2 w0) e^{-i th/2} cosh(v) B``; as ``xi -> +inf``
    ``psi -> sqrt(2 w0) e^{i th/2} cosh(v) B`` and
    ``phi -> -sqrt(2 w0) e^{-i th/2} sinh(v) A``. For ``b > 0`` the physical
    past is ``xi -> -inf``; for ``b < 0`` the two are exchanged.
    """
    if direction not in (PAST, FUTURE):
        raise ContractViolation(f"direction must be 'past' or 'future', got {direction!r}")
    if spec.g.b == 0:
        raise ContractViolation("asymptotic limits need b != 0")
    th = spec.theta_hat
    amp = math.sqrt(2.0 * spec.omega0)
    e_plus = amp * complex(math.cos(th / 2), math.sin(th / 2))
    e_minus = e_plus.conjugate()
    sh, ch = math.sinh(spec.vartheta), math.cosh(spec.vartheta)
    xi_to_minus_inf = (direction == PAST) == (spec.g.b > 0)
    if xi_to_minus_inf:
        pw, fw, pc, fc = e_plus * sh, e_minus * ch, "A", "B"
    else:
        pw, fw, pc, fc = e_plus * ch, -e_minus * sh, "B", "A"
    vec = {"A": spec.A_coeffs, "B": spec.B_coeffs}
    return AsymptoticPair(direction, pw * vec[pc], fw * vec[fc], pc, fc, pw, fw, th)


@dataclass(frozen=True)
class SMatrix:
    entries: np.ndarray
    theta_hat: float

    def apply(self, psi, phi):
        """Map the pair ``(psi, phi)`` of coefficient arrays through the 2x2 matrix."""
        (s00, s01), (s10, s11) = self.entries
        psi, phi = np.asarray(psi), np.asarray(phi)
        return s00 * psi + s01 * phi, s10 * psi + s11 * phi

    @property
    def is_unitary(self) -> bool:
        return np.allclose(self.entries @ self.entries.conj().T, np.eye(2), atol=1e-12)


def s_matrix(spec_or_coupling, theta: float | None = None) -> SMatrix:
    """Scattering matrix taking the past pair to the future pair.

    For ``b > 0`` this is ``[[0, e^{i th}], [-e^{-i th}, 0]]`` with
    ``th = theta - (a/b) ln 2``. For ``b < 0`` the asymptotic regions swap in
    time and the returned matrix is the adjoint of that form.

    Accepts either an :class:`AnalyticSolutionSpec` or a ``Coupling`` plus
    ``theta``.
    """
    spec = spec_or_coupling if isinstance(spec_or_coupling, AnalyticSolutionSpec) else None
    g = spec.g if spec is not None else spec_or_coupling
    if g.b == 0:
        raise ContractViolation("S matrix needs b != 0")
    if spec is not None:
        th = spec.theta_hat
    elif theta is None:
        raise ContractViolation("theta is required when passing a Coupling")
    else:
        th = theta - (g.a / g.b) * math.log(2.0)
    e = complex(math.cos(th), math.sin(th))
    m = np.array([[0.0, e], [-e.conjugate(), 0.0]], dtype=np.complex128)
    if g.b < 0:
        m = m.conj().T
    return SMatrix(m, th)


def density_matrix_analytic(spec: AnalyticSolutionSpec, t: float = 0.0) -> DensityMatrix:
    """``rho = (2 w0 / N) [sinh^2 v |A><A| + cosh^2 v |B><B|]`` at time ``t``."""
    a = spec.A_state(t).amplitudes
    b = spec.B_state(t).amplitudes
    pref = 2.0 * spec.omega0 / spec.N
    rho = pref * (math.sinh(spec.vartheta) ** 2 * np.outer(a, a.conj())
                  + math.cosh(spec.vartheta) ** 2 * np.outer(b, b.conj()))
    return DensityMatrix(rho)


def exceptional_solution(A, B, H: HermitianOperator, t: float, atol: float = SPEC_ATOL):
    """Orthogonal pair of linear solutions, which solves the nonlinear pair with gamma = 0.

    ``A`` and ``B`` are the states at ``t = 0`` in the basis of ``H.matrix``.
    """
    ov = abs(inner_product(B, A))
    if ov > atol:
        raise ValidationError("orthogonality <B|A> = 0", ov)
    return evolve_linear(H, A, t), evolve_linear(H, B, t)


def spec_from_directions(H: HermitianOperator, A, B, omega0, vartheta, theta, g, t0=0.0):
    """Build and validate a spec from coefficient arrays (eigenbasis)."""
    return validate_spec(AnalyticSolutionSpec(np.asarray(_amps(A)), np.asarray(_amps(B)),
                                              omega0, vartheta, theta, g, H, t0))


def random_orthonormal_pair(dim: int, seed: int):
    """Two random orthonormal complex vectors of length ``dim`` (dim >= 2)."""
    if dim < 2:
        raise ContractViolation("need dim >= 2 for an orthonormal pair")
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((dim, 2)) + 1j * rng.standard_normal((dim, 2))
    q, _ = np.linalg.qr(m)
    return q[:, 0], q[:, 1]
