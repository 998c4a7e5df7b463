import math

import numpy as np
import pytest

from lebesgue_qso.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, QuadratureError, integrate


def test_rule_weights():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    np.testing.assert_allclose(NODES, -NODES[::-1], atol=0)


@pytest.mark.parametrize("deg", range(0, 23))
def test_kronrod_exact_for_polynomials(deg):
    res = integrate(lambda x: x**deg, 0.0, 1.0, tol=1e-14)
    assert res.value == pytest.approx(1.0 / (deg + 1), rel=1e-13)


@pytest.mark.parametrize(
    "func,a,b,exact",
    [
        (np.exp, 0.0, 1.0, math.e - 1.0),
        (np.sqrt, 0.0, 1.0, 2.0 / 3.0),
        (lambda x: 1.0 / np.sqrt(x + 1e-12), 0.0, 1.0, 2.0 * (math.sqrt(1 + 1e-12) - math.sqrt(1e-12))),
        (lambda x: 5000.0 * x**4999, 0.0, 1.0, 1.0),
        (np.cos, 0.0, 50.0, math.sin(50.0)),
    ],
)
def test_known_integrals(func, a, b, exact):
    res = integrate(func, a, b, tol=1e-10)
    assert abs(res.value - exact) <= 1e-9
    assert res.error <= 1e-10


def test_breakpoints_handle_kinks():
    res = integrate(lambda x: np.abs(x - 0.3), 0.0, 1.0, tol=1e-13, breakpoints=[0.3])
    assert res.value == pytest.approx(0.045 + 0.245, abs=1e-14)
    assert res.intervals == 2


def test_empty_interval():
    assert integrate(np.exp, 0.4, 0.4).value == 0.0


def test_reports_subdivision_limit():
    with pytest.raises(QuadratureError):
        integrate(lambda x: np.sign(np.sin(1 / (x + 1e-9))), 0.0, 1.0, tol=1e-14, max_intervals=64)


def test_rejects_reversed_bounds():
    with pytest.raises(ValueError):
        integrate(np.exp, 1.0, 0.0)
