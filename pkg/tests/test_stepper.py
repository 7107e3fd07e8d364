import math

import numpy as np
import pytest

from nlqm.errors import ContractViolation, IntegrationError
from nlqm.stepper import IntegratorConfig, rk4_step, solve


def rotation(t, y):
    return 1j * y


@pytest.mark.parametrize("cfg, tol", [
    (IntegratorConfig(), 1e-8),
    (IntegratorConfig(abs_tol=1e-12, rel_tol=1e-12), 1e-10),
    (IntegratorConfig("rk4_fixed", initial_step=0.01), 1e-8),
])
def test_complex_rotation(cfg, tol):
    ts = np.linspace(0, 10, 11)
    _, ys, n = solve(rotation, (0, 10), np.array([1.0 + 0j]), cfg, ts)
    assert ys.dtype == np.complex128 and n > 0
    np.testing.assert_allclose(ys[:, 0], np.exp(1j * ts), atol=tol)


@pytest.mark.parametrize("method, step", [("rk45_adaptive", 0.0), ("rk4_fixed", 0.01)])
def test_backward(method, step):
    ts = np.linspace(2, -3, 6)
    _, ys, _ = solve(lambda t, y: -y, (2, -3), np.array([1.0]), IntegratorConfig(method, initial_step=step), ts)
    np.testing.assert_allclose(ys[:, 0], np.exp(-(ts - 2)), rtol=1e-8)


def test_matrix_shaped_state():
    m = np.array([[0, 1], [-1, 0]], dtype=float)
    _, ys, _ = solve(lambda t, y: y @ m, (0, 1), np.eye(2))
    np.testing.assert_allclose(ys[-1], [[math.cos(1), math.sin(1)], [-math.sin(1), math.cos(1)]], atol=1e-9)


def test_rk4_order():
    errs = []
    for h in (0.1, 0.05):
        _, ys, _ = solve(rotation, (0, 2), np.array([1 + 0j]), IntegratorConfig("rk4_fixed", initial_step=h))
        errs.append(abs(ys[-1, 0] - np.exp(2j)))
    assert 14 < errs[0] / errs[1] < 18


def test_rk4_step_polynomial_exact():
    # RK4 integrates a cubic right-hand side in t exactly
    y = rk4_step(lambda t, y: 4 * t**3, 0.0, np.array([0.0]), 1.0)
    assert y[0] == pytest.approx(1.0)


def test_fixed_step_hits_samples():
    ts = np.array([0.0, 0.013, 0.5, 0.77])
    times, ys, _ = solve(lambda t, y: np.ones_like(y), (0, 0.77), np.array([0.0]),
                         IntegratorConfig("rk4_fixed", initial_step=0.1), ts)
    np.testing.assert_array_equal(times, ts)
    np.testing.assert_allclose(ys[:, 0], ts, atol=1e-15)


def test_blow_up_reports_last_good_time():
    with pytest.raises(IntegrationError) as exc:
        solve(lambda t, y: y * y, (0, 2), np.array([1.0]))
    assert 0.9 < exc.value.last_good_time < 1.0


def test_max_steps():
    with pytest.raises(IntegrationError):
        solve(rotation, (0, 100), np.array([1 + 0j]), IntegratorConfig(max_steps=10))


@pytest.mark.parametrize("kwargs", [
    {"method": "euler"}, {"abs_tol": 0.0}, {"max_step": -1.0}, {"initial_step": -0.1},
    {"method": "rk4_fixed"},
])
def test_config_contract(kwargs):
    with pytest.raises(ContractViolation):
        IntegratorConfig(**kwargs)


@pytest.mark.parametrize("span, t_eval", [((0, 0), None), ((0, 1), [0.5, 0.2]), ((0, 1), [0.5, 2.0])])
def test_sample_contract(span, t_eval):
    with pytest.raises(ContractViolation):
        solve(rotation, span, np.array([1 + 0j]), t_eval=t_eval)
