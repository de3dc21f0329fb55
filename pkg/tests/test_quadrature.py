import mpmath
import pytest
from mpmath import mpf

from kleintrace.errors import PrecisionUnreachable
from kleintrace.quadrature import gauss_legendre, integrate_powers, power_sums


def test_gauss_legendre_is_exact_for_low_degree():
    nodes, weights = gauss_legendre(6)
    assert abs(sum(weights) - 2) < 1e-70
    # exact through degree 11
    assert abs(sum(w * x ** 10 for x, w in zip(nodes, weights)) - mpf(2) / 11) < 1e-70
    assert abs(sum(w * x ** 11 for x, w in zip(nodes, weights))) < 1e-70


def test_odd_order_has_center_node():
    nodes, _ = gauss_legendre(5)
    assert mpf(0) in nodes and len(nodes) == 5


def test_sech_power_integrals():
    pi = mpmath.pi
    res = integrate_powers(lambda y: 1 / mpmath.cosh(pi * y), 4, pi, pi,
                           mpf(2) ** -128, 32, 20000)
    # int y^2 sech(pi y) dy = 1/4 and int y^4 sech(pi y) dy = 5/16
    assert abs(res.values[0] - 1) < 1e-35
    assert abs(res.values[1]) < 1e-35
    assert abs(res.values[2] - mpf(1) / 4) < 1e-35
    assert abs(res.values[4] - mpf(5) / 16) < 1e-35
    assert all(e < 1e-30 for e in res.errors)
    reuse = power_sums(res.nodes, res.weights, 2)
    assert abs(reuse[2] - mpf(1) / 4) < 1e-35


def test_panel_budget_is_enforced():
    pi = mpmath.pi
    with pytest.raises(PrecisionUnreachable):
        integrate_powers(lambda y: 1 / mpmath.cosh(pi * y), 2, pi, pi, mpf(2) ** -128, 4, 3)
