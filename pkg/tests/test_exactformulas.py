import mpmath
import pytest
from mpmath import mpf

from conftest import n4_spec
from kleintrace import (
    alpha_n3,
    alpha_n4,
    build_weight,
    moment_table,
    tau_n4,
    trace_values_n3,
    trace_values_n4,
)
from kleintrace.errors import ValidationError
from kleintrace.exactformulas import (
    SERIES_RADIUS,
    _h,
    alpha_n3_display,
    alpha_n4_display,
    divided_difference,
)

PI = mpmath.pi


def test_n3_at_beta_zero():
    v = trace_values_n3(0)
    # T(1) = int sech^3(pi y) dy = 1/2
    assert abs(v.T1 - mpf(1) / 2) < 1e-70
    assert abs(v.alpha - (mpf(1) / 4 - 2 / PI ** 2)) < 1e-70
    assert abs(-v.Tz2 / v.T1 - v.alpha) < 1e-70


@pytest.mark.parametrize("kappa", ["-3.7", "-1.2", "-0.26", "-0.24", "-0.05", "-1e-6"])
def test_n3_matches_display(kappa):
    kappa = mpf(kappa)
    assert abs(alpha_n3(kappa) - alpha_n3_display(kappa)) < 1e-55


def test_n3_domain():
    assert alpha_n3(0) == 0
    assert abs(alpha_n3(mpf("-1e-30"))) < 1e-29
    with pytest.raises(ValidationError):
        alpha_n3(mpf("0.1"))
    with pytest.raises(ValidationError):
        trace_values_n3(0.5j)
    # imaginary beta with beta^2 > -1/4 is allowed
    assert trace_values_n3(0.3j).T1 > 0


def test_n4_at_origin():
    v = trace_values_n4(0, 0)
    assert abs(v.T1 - 4 / (3 * PI)) < 1e-70
    assert abs(v.alpha - (mpf(1) / 12 - 1 / (2 * PI ** 2))) < 1e-70
    assert abs(v.tau - 32 * (PI ** 2 - 6) / (3 * PI ** 2)) < 1e-70


@pytest.mark.parametrize("beta,gamma", [("0.3", "0.7"), ("1.1", "0.05"), ("2.5", "0.4"), ("0.2", "0.21")])
def test_n4_matches_display_and_is_symmetric(beta, gamma):
    b, g = mpf(beta), mpf(gamma)
    assert abs(alpha_n4(b, g) - alpha_n4_display(b, g)) < 1e-50
    assert abs(alpha_n4(b, g) - alpha_n4(g, b)) < 1e-70
    assert tau_n4(b, g) == 128 * alpha_n4(b, g)


def test_series_and_closed_form_meet():
    below, above = SERIES_RADIUS * (1 - mpf(2) ** -60), SERIES_RADIUS * (1 + mpf(2) ** -60)
    assert abs(_h(below) - _h(above)) < 1e-15
    # at the seam itself both branches agree to working precision
    closed = 4 * mpmath.sqrt(SERIES_RADIUS) / mpmath.sinh(2 * PI * mpmath.sqrt(SERIES_RADIUS))
    assert abs(_h(below) - closed) < 1e-17


def test_taylor_branch_matches_high_precision_difference():
    s, t = mpf("0.49"), mpf("0.49") + mpf("3e-9")
    taylor = divided_difference(_h, s, t)
    with mpmath.workprec(1024):
        direct = (_h(s) - _h(t)) / (s - t)
    # remainder is O(d^6)
    assert abs(taylor - direct) < 1e-45


def test_continuity_across_the_diagonal():
    h = mpf("1e-6")
    for beta in (mpf(0), mpf("0.5"), mpf("1.3")):
        on = alpha_n4(beta, beta)
        second = alpha_n4(beta, beta + h) + alpha_n4(beta, beta - h) - 2 * on
        assert abs(second) <= 1e-9
        # the first difference is gradient * h, not o(h)
        assert abs(alpha_n4(beta, beta + h) - on) <= 1e-6


def test_n3_examples():
    assert abs(alpha_n3(mpf(-5) / 4) - (mpf(1) / 4 + 1 / (1 - mpmath.cosh(PI)))) < 1e-70
    assert abs(alpha_n3(mpf(-5) / 4) - trace_values_n3(1).alpha) < 1e-70
    expected = 1 / (2 * mpmath.cosh(PI / 2) ** 2 * mpmath.cosh(PI))
    assert abs(trace_values_n3(1).T1 - expected) < 1e-70
    for beta in ("0.1", "0.5", "1", "2"):
        b = mpf(beta)
        v = trace_values_n3(b)
        assert abs(alpha_n3(-b * b - mpf(1) / 4) + v.Tz2 / v.T1) < 1e-25


def test_n4_generic_consistency():
    v = trace_values_n4(mpf("0.3"), mpf("0.7"))
    assert abs(v.alpha + v.Tz2 / v.T1) < 1e-25
    assert abs(v.alpha - alpha_n4_display(mpf("0.3"), mpf("0.7"))) < 1e-25


def test_n4_diagonal_limit_against_nearby_values():
    beta = mpf("0.6")
    on = alpha_n4(beta, beta)
    for h in (mpf("1e-4"), mpf("1e-3")):
        mid = (alpha_n4(beta, beta + h) + alpha_n4(beta, beta - h)) / 2
        assert abs(on - mid) < h * h


def test_n4_against_quadrature(cfg):
    M = moment_table(build_weight(n4_spec(mpf("0.2"), mpf("0.5")), [0, 0, 16]), 2, cfg)
    assert abs(-(M[2] / M[0]).real - alpha_n4(mpf("0.2"), mpf("0.5"))) < 1e-8
