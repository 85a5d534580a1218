import numpy as np
import pytest

from entroflow.numdiff import (
    central_gradient,
    central_hessian,
    central_jacobian,
    coordinate_steps,
    richardson_pair,
)


def quadratic(x):
    return float(x @ x + 0.5 * x[0] * x[1])


def test_coordinate_steps_scale_with_magnitude():
    x = np.array([0.0, 2.0, -30.0])
    steps = coordinate_steps(x, rel_step=1e-5)
    assert steps == pytest.approx([1e-5, 2e-5, 30e-5])


def test_gradient_on_polynomial_is_near_exact():
    x = np.array([0.3, -1.2, 4.0])
    g = central_gradient(quadratic, x)
    expected = 2.0 * x + 0.5 * np.array([x[1], x[0], 0.0])
    assert np.abs(g - expected).max() < 1e-9


def test_gradient_of_transcendental():
    g = central_gradient(lambda x: float(np.sin(x[0]) * np.exp(x[1])), np.array([0.7, -0.2]))
    expected = np.array([np.cos(0.7) * np.exp(-0.2), np.sin(0.7) * np.exp(-0.2)])
    assert np.abs(g - expected).max() < 1e-9


def test_richardson_agrees_with_single_step_to_1e7():
    # two-step extrapolation against the plain central estimate
    x = np.array([0.4, 1.1])
    f = lambda t: float(np.cos(t[0]) + t[1] ** 3)
    plain = central_gradient(f, x, richardson=False)
    extrap = central_gradient(f, x, richardson=True)
    assert np.abs(plain - extrap).max() < 1e-7


def test_richardson_pair_removes_quadratic_error():
    # derivative of sin at 0 with large h: plain error ~h^2/6, pair ~h^4
    h = 1e-2
    d_h = np.sin(h) / h
    d_h2 = np.sin(h / 2) / (h / 2)
    assert abs(richardson_pair(d_h, d_h2) - 1.0) < 1e-9
    assert abs(d_h - 1.0) > 1e-6


def test_jacobian_of_vector_function():
    def f(x):
        return np.array([x[0] * x[1], np.sin(x[1])])

    x = np.array([2.0, 0.3])
    J = central_jacobian(f, x)
    expected = np.array([[0.3, 2.0], [0.0, np.cos(0.3)]])
    assert np.abs(J - expected).max() < 1e-9


def test_hessian_symmetric_and_accurate():
    x = np.array([0.5, -0.7, 1.3])
    H = central_hessian(quadratic, x)
    expected = np.array([[2.0, 0.5, 0.0], [0.5, 2.0, 0.0], [0.0, 0.0, 2.0]])
    assert np.array_equal(H, H.T)
    assert np.abs(H - expected).max() < 1e-6
