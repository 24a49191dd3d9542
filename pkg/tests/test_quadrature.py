import math

import numpy as np
import pytest

from genfresnel import ConvergenceError
from genfresnel.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    geometric_breakpoints,
    gk15,
    integrate,
    integrate_weighted_power,
    power_phase_breakpoints,
)


def test_rule_weights():
    assert abs(KRONROD_WEIGHTS.sum() - 2.0) <= 1e-15
    assert abs(GAUSS_WEIGHTS.sum() - 2.0) <= 1e-15
    # Kronrod rule is exact for degree 22 on odd/even monomials
    for deg in range(0, 23):
        exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
        assert abs(NODES ** deg @ KRONROD_WEIGHTS - exact) <= 1e-14


def test_gk15_panels():
    k, err = gk15(np.cos, np.array([0.0, 1.0]), np.array([1.0, 2.0]))
    assert np.allclose(k, [math.sin(1.0), math.sin(2.0) - math.sin(1.0)], atol=1e-15)
    assert np.all(err < 1e-13)


def test_integrate_smooth_and_oscillatory():
    res = integrate(lambda x: np.exp(-x * x), [-10.0, 10.0])
    assert abs(res.value - math.sqrt(math.pi)) <= 1e-13
    pts = power_phase_breakpoints(0.0, 30.0, 1.0, lam=40.0)
    res = integrate(lambda x: np.exp(40j * x) * np.exp(-x), pts)
    assert abs(res.value - (1 - np.exp((40j - 1) * 30)) / (1 - 40j)) <= 1e-13


def test_integrate_budget():
    with pytest.raises(ConvergenceError):
        integrate(lambda x: np.sin(1.0 / x) / x, [1e-12, 1.0], max_panels=200)


def test_weighted_power_singular_endpoint():
    res = integrate_weighted_power(lambda x: np.exp(-x), 0.3, 60.0)
    assert abs(res.value - math.gamma(0.3)) <= 1e-12 * math.gamma(0.3)
    res = integrate_weighted_power(lambda x: np.exp(-x), 2.5, 80.0)
    assert abs(res.value - math.gamma(2.5)) <= 1e-12 * math.gamma(2.5)


def test_breakpoints():
    pts = power_phase_breakpoints(0.0, 10.0, 2.0)
    assert pts[0] == 0 and pts[-1] == 10 and np.all(np.diff(pts) > 0)
    assert np.allclose(np.diff(pts[1:-1] ** 2), math.pi)
    g = geometric_breakpoints(1e-3, 1.0)
    assert abs(g[0] - 1e-3) < 1e-18 and abs(g[-1] - 1.0) < 1e-15
