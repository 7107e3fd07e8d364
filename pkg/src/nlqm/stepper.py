"""Explicit Runge-Kutta steppers shared by every integrating module.

Two methods are available: a classical fixed-step RK4 and the Dormand-Prince
5(4) embedded pair with PI step-size control and its 4th-order continuous
extension for dense output. Complex states are viewed as interleaved real
pairs so one stepper serves complex and real problems alike.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, IntegrationError

METHODS = ("rk4_fixed", "rk45_adaptive")


@dataclass(frozen=True)
class IntegratorConfig:
    """Stepper settings.

    For ``rk4_fixed`` the step is ``initial_step`` (shrunk so that every
    requested sample time is hit exactly). For ``rk45_adaptive`` the step is
    controlled by ``abs_tol``/``rel_tol`` and capped at ``max_step``; an
    ``initial_step`` of 0 selects the step automatically.
    """

    method: str = "rk45_adaptive"
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_step: float = math.inf
    initial_step: float = 0.0
    safety: float = 0.9
    max_steps: int = 10_000_000

    def __post_init__(self):
        if self.method not in METHODS:
            raise ContractViolation(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ContractViolation("tolerances must be positive")
        if self.max_step <= 0:
            raise ContractViolation("max_step must be positive")
        if self.initial_step < 0:
            raise ContractViolation("initial_step must be non-negative")
        if self.method == "rk4_fixed" and self.initial_step == 0:
            raise ContractViolation("rk4_fixed needs initial_step > 0 as its step size")


# Dormand-Prince 5(4), Hairer-Norsett-Wanner table
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
# difference between 5th and embedded 4th order weights (7 stages, FSAL)
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# continuous extension: y(t + s h) = y + h * K^T P [s, s^2, s^3, s^4]
_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

_BETA = 0.04
_ALPHA = 0.2 - 0.75 * _BETA
_MIN_FACTOR, _MAX_FACTOR = 0.2, 10.0


def _rms(x):
    return math.sqrt(float(np.mean(x * x)))


def _as_real(fun, is_complex):
    if not is_complex:
        return fun

    def wrapped(t, y):
        return np.asarray(fun(t, y.view(np.complex128)), dtype=np.complex128).view(np.float64)

    return wrapped


def _check_finite(y, t):
    if not np.all(np.isfinite(y)):
        raise IntegrationError("non-finite state", t)


def _sample_times(t_span, t_eval):
    t0, t1 = map(float, t_span)
    if not (math.isfinite(t0) and math.isfinite(t1)) or t0 == t1:
        raise ContractViolation("t_span must be a finite, non-empty interval")
    if t_eval is None:
        return np.array([t0, t1])
    t_eval = np.asarray(t_eval, dtype=float)
    direction = np.sign(t1 - t0)
    if np.any(np.diff(t_eval) * direction <= 0):
        raise ContractViolation("t_eval must be strictly monotone in the direction of integration")
    lo, hi = min(t0, t1), max(t0, t1)
    if t_eval.min() < lo - 1e-12 * max(1, abs(lo)) or t_eval.max() > hi + 1e-12 * max(1, abs(hi)):
        raise ContractViolation("t_eval must lie inside t_span")
    return t_eval


def solve(fun, t_span, y0, config: IntegratorConfig | None = None, t_eval=None):
    """Integrate ``dy/dt = fun(t, y)`` over ``t_span``.

    Integration may run backwards (``t_span[1] < t_span[0]``).

    Returns
    -------
    times : ndarray
        ``t_eval`` if given, else the two end points.
    ys : ndarray
        States at ``times``, shape ``(len(times),) + y0.shape``, same dtype as
        ``y0``.
    n_steps : int
        Accepted steps.

    Raises
    ------
    IntegrationError
        On step-size underflow, non-finite values or exceeding ``max_steps``.
    """
    config = config or IntegratorConfig()
    y0 = np.asarray(y0)
    is_complex = np.iscomplexobj(y0)
    shape = y0.shape
    y = np.ascontiguousarray(y0.astype(np.complex128 if is_complex else np.float64).ravel())
    if is_complex:
        y = y.view(np.float64)
    f = _as_real(lambda t, v: np.ravel(fun(t, v.reshape(shape))), is_complex)
    times = _sample_times(t_span, t_eval)
    # overflow is detected explicitly and reported as IntegrationError
    with np.errstate(over="ignore", invalid="ignore"):
        if config.method == "rk4_fixed":
            out, n = _rk4_fixed(f, float(t_span[0]), y, times, config)
        else:
            out, n = _dopri(f, float(t_span[0]), float(t_span[1]), y, times, config)
    out = np.asarray(out)
    if is_complex:
        out = out.view(np.complex128)
    return times, out.reshape((len(times),) + shape), n


def rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _rk4_fixed(f, t0, y, times, config):
    out = []
    t = t0
    n_steps = 0
    for target in times:
        span = target - t
        if span == 0:
            out.append(y.copy())
            continue
        n = max(1, math.ceil(abs(span) / config.initial_step - 1e-9))
        h = span / n
        for i in range(n):
            y = rk4_step(f, t + i * h, y, h)
            _check_finite(y, t + i * h)
        n_steps += n
        t = target
        out.append(y.copy())
    return out, n_steps


def _initial_step(f, t0, y0, f0, direction, config):
    scale = config.abs_tol + np.abs(y0) * config.rel_tol
    d0, d1 = _rms(y0 / scale), _rms(f0 / scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, config.max_step)
    y1 = y0 + direction * h0 * f0
    d2 = _rms((f(t0 + direction * h0, y1) - f0) / scale) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, config.max_step)


def _dopri(f, t0, t1, y, times, config):
    direction = 1.0 if t1 > t0 else -1.0
    t = t0
    fy = f(t, y)
    h = config.initial_step or _initial_step(f, t0, y, fy, direction, config)
    h = min(h, config.max_step, abs(t1 - t0))
    err_prev = 1.0
    out = []
    idx = 0
    while idx < len(times) and (times[idx] - t) * direction <= 0:
        out.append(y.copy())
        idx += 1
    n_steps = 0
    K = np.empty((7, y.size))
    while (t1 - t) * direction > 0:
        if n_steps >= config.max_steps:
            raise IntegrationError("maximum number of steps exceeded", t)
        min_step = 16 * np.spacing(abs(t)) if t != 0 else 1e-300
        if h < min_step:
            raise IntegrationError(f"step size underflow (h={h:.3e})", t)
        last = abs(t1 - t) <= h * (1 + 1e-12)
        hs = abs(t1 - t) if last else h
        hd = direction * hs
        K[0] = fy
        for s in range(1, 6):
            dy = np.dot(_A[s], K[:s]) * hd
            K[s] = f(t + _C[s] * hd, y + dy)
        y_new = y + hd * np.dot(_B, K[:6])
        f_new = f(t + hd, y_new)
        K[6] = f_new
        scale = config.abs_tol + config.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = _rms(hd * np.dot(_E, K) / scale) if np.all(np.isfinite(y_new)) else math.inf
        if err <= 1.0:
            t_new = t1 if last else t + hd
            Q = K.T @ _P
            while idx < len(times) and (times[idx] - t_new) * direction <= 1e-14 * max(1.0, abs(t_new)):
                s = (times[idx] - t) / hd
                out.append(y + hd * (Q @ np.array([s, s * s, s**3, s**4])))
                idx += 1
            t, y, fy = t_new, y_new, f_new
            n_steps += 1
            if err == 0:
                factor = _MAX_FACTOR
            else:
                factor = config.safety * err ** (-_ALPHA) * err_prev**_BETA
            err_prev = max(err, 1e-4)
            h = min(hs * min(_MAX_FACTOR, max(_MIN_FACTOR, factor)), config.max_step)
        else:
            if not math.isfinite(err):
                factor = _MIN_FACTOR
            else:
                factor = max(_MIN_FACTOR, config.safety * err ** -0.2)
            h = hs * factor
    while idx < len(times):
        out.append(y.copy())
        idx += 1
    return out, n_steps
