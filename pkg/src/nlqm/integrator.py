"""Direct numerical integration of the coupled nonlinear pair.

    i dpsi/dt = H psi + g   <phi|psi> phi
    i dphi/dt = H phi + g^* <psi|phi> psi

for any finite-dimensional ``H``, plus the linearized system in which the
overlap is replaced by a prescribed function ``gamma(t)``. These integrators
are the independent check on the closed forms in :mod:`nlqm.analytic`.

``rhs_variant="printed"`` swaps the second equation for
``i dphi/dt = H phi + g^* <psi|psi> phi``, a literal alternative form kept
for comparison; it does not reproduce the reduced equations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation
from .hilbert import Coupling, HermitianOperator, ReducedState, StateVector, _amps, _check_pair
from .stepper import IntegratorConfig, solve

RHS_VARIANTS = ("derived", "printed")


def nonlinear_rhs(psi, phi, H: HermitianOperator, g: Coupling, rhs_variant: str = "derived"):
    """Time derivatives ``(dpsi/dt, dphi/dt)`` as complex arrays."""
    a, b = _check_pair(psi, phi)
    if a.shape != (H.dim,):
        raise ContractViolation(f"state dimension {a.shape} does not match H ({H.dim})")
    return _pair_rhs(a, b, H.matrix, g.g, rhs_variant)


def _pair_rhs(a, b, h, g, rhs_variant="derived"):
    gamma = np.vdot(b, a)
    dpsi = -1j * (h @ a + g * gamma * b)
    if rhs_variant == "derived":
        dphi = -1j * (h @ b + np.conj(g) * np.conj(gamma) * a)
    elif rhs_variant == "printed":
        dphi = -1j * (h @ b + np.conj(g) * np.vdot(a, a) * b)
    else:
        raise ContractViolation(f"rhs_variant must be one of {RHS_VARIANTS}")
    return dpsi, dphi


def linear_rhs(psi, H: HermitianOperator):
    return -1j * (H.matrix @ _amps(psi))


@dataclass(frozen=True)
class Trajectory:
    """Sampled state pair with derived observables.

    ``psi`` and ``phi`` have shape ``(n_times, dim)``; the observable arrays
    have length ``n_times``. ``drift_report`` holds the maximum deviation
    from the first sample of ``N`` (relative), ``omega0_sq``, the Schwarz
    parameter, and the maximum of ``|delta - |gamma|^2|``.
    """

    times: np.ndarray
    psi: np.ndarray
    phi: np.ndarray
    basis_tag: str = "standard"
    n_steps: int = 0
    drift_report: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.psi.shape != self.phi.shape or self.psi.shape[0] != len(self.times):
            raise ContractViolation("trajectory arrays are misaligned")
        if not self.drift_report:
            object.__setattr__(self, "drift_report", drift_report(self))

    @property
    def psi_states(self):
        return [StateVector(v, self.basis_tag) for v in self.psi]

    @property
    def phi_states(self):
        return [StateVector(v, self.basis_tag) for v in self.phi]

    @property
    def psi_norm_sq(self):
        return np.einsum("ij,ij->i", self.psi.conj(), self.psi).real

    @property
    def phi_norm_sq(self):
        return np.einsum("ij,ij->i", self.phi.conj(), self.phi).real

    @property
    def N(self):
        return self.psi_norm_sq + self.phi_norm_sq

    @property
    def tau(self):
        return self.psi_norm_sq - self.phi_norm_sq

    @property
    def gamma(self):
        return np.einsum("ij,ij->i", self.phi.conj(), self.psi)

    @property
    def delta(self):
        return np.abs(self.gamma) ** 2

    @property
    def omega0_sq(self):
        return 0.25 * self.tau**2 + self.delta

    @property
    def schwarz(self):
        return self.psi_norm_sq * self.phi_norm_sq - self.delta

    @property
    def purity(self):
        """``Tr rho^2`` per sample, computed from the states directly."""
        # Tr[(|p><p| + |f><f|)^2] = |p|^4 + |f|^4 + 2 |<p|f>|^2
        n = self.N
        return (self.psi_norm_sq**2 + self.phi_norm_sq**2 + 2 * self.delta) / n**2

    @property
    def observables(self):
        return [ReducedState.from_scalars(n, t, g) for n, t, g in zip(self.N, self.tau, self.gamma)]


def drift_report(traj: Trajectory) -> dict:
    n = traj.N
    gamma = traj.gamma
    w2 = traj.omega0_sq
    s = traj.schwarz
    # delta is derived from gamma here, so this residual only checks arithmetic
    delta_res = np.abs(traj.delta - (gamma.conj() * gamma).real)
    return {
        "N_rel": float(np.max(np.abs(n - n[0])) / max(abs(n[0]), 1e-300)),
        "omega0_sq": float(np.max(np.abs(w2 - w2[0]))),
        "delta_minus_gamma_sq": float(np.max(delta_res)),
        "schwarz": float(np.max(np.abs(s - s[0]))),
    }


def _pack(a, b):
    return np.concatenate([a, b])


def _sample_grid(t_span, t_eval):
    if t_eval is None:
        return np.linspace(float(t_span[0]), float(t_span[1]), 2)
    return t_eval


def integrate(psi0, phi0, H: HermitianOperator, g: Coupling, t_span, config: IntegratorConfig | None = None,
              t_eval=None, rhs_variant: str = "derived") -> Trajectory:
    """Integrate the nonlinear pair from ``(psi0, phi0)`` at ``t_span[0]``.

    Raises
    ------
    IntegrationError
        On step-size underflow or non-finite values.
    """
    a, b = _check_pair(psi0, phi0)
    d = H.dim
    if a.shape != (d,):
        raise ContractViolation(f"state dimension {a.shape} does not match H ({d})")
    if rhs_variant not in RHS_VARIANTS:
        raise ContractViolation(f"rhs_variant must be one of {RHS_VARIANTS}")
    h, gc = H.matrix, g.g

    def rhs(t, y):
        dpsi, dphi = _pair_rhs(y[:d], y[d:], h, gc, rhs_variant)
        return _pack(dpsi, dphi)

    times, ys, n = solve(rhs, t_span, _pack(a, b), config or IntegratorConfig(), _sample_grid(t_span, t_eval))
    tag = psi0.basis_tag if isinstance(psi0, StateVector) else H.basis_tag
    return Trajectory(times, ys[:, :d], ys[:, d:], tag, n)


def integrate_linearized(psi0, phi0, H: HermitianOperator, g: Coupling, gamma_fn, t_span,
                         config: IntegratorConfig | None = None, t_eval=None) -> Trajectory:
    """Integrate ``i psi' = H psi + g gamma(t) phi``, ``i phi' = H phi + g^* gamma(t)^* psi``.

    ``gamma_fn`` maps a time to a complex overlap and must be defined on all of
    ``t_span``.
    """
    a, b = _check_pair(psi0, phi0)
    d = H.dim
    if a.shape != (d,):
        raise ContractViolation(f"state dimension {a.shape} does not match H ({d})")
    h, gc = H.matrix, g.g

    def rhs(t, y):
        gam = gamma_fn(t)
        psi, phi = y[:d], y[d:]
        return _pack(-1j * (h @ psi + gc * gam * phi), -1j * (h @ phi + np.conj(gc * gam) * psi))

    times, ys, n = solve(rhs, t_span, _pack(a, b), config or IntegratorConfig(), _sample_grid(t_span, t_eval))
    tag = psi0.basis_tag if isinstance(psi0, StateVector) else H.basis_tag
    return Trajectory(times, ys[:, :d], ys[:, d:], tag, n)
