"""Hamiltonian-independent dynamics of the pair scalars (N, tau, gamma, delta).

Whatever ``H`` is, the nonlinear pair obeys the closed system

    dN/dt = 0,   dtau/dt = 4 b delta,   dgamma/dt = i g gamma tau,
    ddelta/dt = -2 b tau delta,

whose physical solution (``b != 0``) is

    tau = 2 w0 tanh(xi),   delta = w0^2 sech^2(xi),   xi = 2 b w0 (t - t0),
    gamma = w0 sech(xi) exp(i [theta + (a / b) log cosh xi]).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .hilbert import Coupling, ReducedState
from .stepper import IntegratorConfig, solve

TANH_PHYSICAL = "tanh_physical"
COTH_SINGULAR = "coth_singular"
TAN_IMAGINARY_LAMBDA = "tan_imaginary_lambda"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ReducedParams:
    omega0: float
    theta: float
    g: Coupling
    t0: float = 0.0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ContractViolation("omega0 must be positive")
        if self.g.b == 0:
            raise ContractViolation("the tanh/sech solution needs b != 0; use the real-g appendix case")

    def xi(self, t):
        return 2.0 * self.g.b * self.omega0 * (np.asarray(t, dtype=float) - self.t0)


@dataclass(frozen=True)
class BranchReport:
    branch_kind: str
    physical: bool
    reason: str


def log_cosh(x):
    """``log(cosh x)`` without overflow for large ``|x|``."""
    ax = np.abs(np.asarray(x, dtype=float))
    return ax + np.log1p(np.exp(-2.0 * ax)) - math.log(2.0)


def reduced_rhs(state: ReducedState, g: Coupling) -> ReducedState:
    """Time derivatives ``(dN, dtau, dgamma, ddelta)`` packed as a ReducedState."""
    return ReducedState(
        N=0.0,
        tau=4.0 * g.b * state.delta,
        gamma=1j * g.g * state.gamma * state.tau,
        delta=-2.0 * g.b * state.tau * state.delta,
    )


def tau_delta_analytic(p: ReducedParams, t):
    xi = p.xi(t)
    tau = 2.0 * p.omega0 * np.tanh(xi)
    sech = np.exp(-log_cosh(xi))
    delta = p.omega0**2 * sech**2
    if np.ndim(tau) == 0:
        return float(tau), float(delta)
    return tau, delta


def gamma_phase(p: ReducedParams, t):
    """Continuous phase ``theta + (a/b) log cosh xi`` of the analytic overlap."""
    return p.theta + (p.g.a / p.g.b) * log_cosh(p.xi(t))


def gamma_analytic(p: ReducedParams, t):
    xi = p.xi(t)
    lc = log_cosh(xi)
    gamma = p.omega0 * np.exp(-lc) * np.exp(1j * (p.theta + (p.g.a / p.g.b) * lc))
    return complex(gamma) if np.ndim(gamma) == 0 else gamma


def omega0_from_state(state: ReducedState, atol: float = 1e-12) -> float:
    """Positive root of ``w0^2 = tau^2/4 + delta``."""
    w2 = state.omega0_sq
    if w2 < -atol:
        raise ContractViolation(f"tau^2/4 + delta = {w2:.3e} < 0: inconsistent reduced state")
    return math.sqrt(max(w2, 0.0))


def classify_branch(lambda_squared: float, branch: str = "tanh") -> BranchReport:
    """Sort a first integral ``dtau/dt + b tau^2 = b lambda^2`` into its solution family.

    ``branch`` picks between the two real-lambda families, ``"tanh"`` or
    ``"coth"``; it is ignored when ``lambda_squared < 0``.
    """
    if branch not in ("tanh", "coth"):
        raise ContractViolation(f"branch must be 'tanh' or 'coth', got {branch!r}")
    if lambda_squared < 0:
        return BranchReport(
            TAN_IMAGINARY_LAMBDA, False,
            "imaginary lambda: tau = -|lambda| tan(b|lambda|(t - c2)) blows up at finite time, "
            "so the wave function is not finite",
        )
    if lambda_squared == 0:
        return BranchReport(
            DEGENERATE, False,
            "lambda = 0 forces w0 = 0, so delta = -tau^2/4 <= 0; only the fixed line "
            "tau = delta = 0 (orthogonal pair) survives",
        )
    if branch == "coth":
        return BranchReport(
            COTH_SINGULAR, False,
            "coth branch: delta = -w0^2 cosech^2(2 b w0 t) is negative and tau is singular at t = t0",
        )
    return BranchReport(
        TANH_PHYSICAL, True,
        "tanh branch: delta = w0^2 sech^2 > 0 and tau bounded in (-2 w0, 2 w0)",
    )


@dataclass(frozen=True)
class ReducedTrajectory:
    times: np.ndarray
    N: np.ndarray
    tau: np.ndarray
    gamma: np.ndarray

    @property
    def delta(self):
        return np.abs(self.gamma) ** 2

    @property
    def omega0_sq(self):
        return 0.25 * self.tau**2 + self.delta

    @property
    def states(self):
        return [ReducedState.from_scalars(n, t, g) for n, t, g in zip(self.N, self.tau, self.gamma)]


def integrate_reduced(initial: ReducedState, g: Coupling, t_span, config: IntegratorConfig | None = None,
                      t_eval=None, atol: float = 1e-10) -> ReducedTrajectory:
    """Integrate the reduced system numerically.

    The state is ``(N, tau, Re gamma, Im gamma)``; ``delta`` is recomputed as
    ``|gamma|^2`` so the constraint cannot drift.
    """
    if g.b == 0:
        raise ContractViolation("integrate_reduced expects b != 0")
    if abs(initial.delta - abs(initial.gamma) ** 2) > atol * max(1.0, initial.delta):
        raise ContractViolation("initial state violates delta = |gamma|^2")
    a, b = g.a, g.b

    def rhs(t, y):
        _, tau, gr, gi = y
        delta = gr * gr + gi * gi
        # i g gamma tau with g = a + i b
        return np.array([0.0, 4.0 * b * delta, -tau * (b * gr + a * gi), tau * (a * gr - b * gi)])

    y0 = np.array([initial.N, initial.tau, initial.gamma.real, initial.gamma.imag])
    times, ys, _ = solve(rhs, t_span, y0, config or IntegratorConfig(), t_eval)
    return ReducedTrajectory(times, ys[:, 0], ys[:, 1], ys[:, 2] + 1j * ys[:, 3])
