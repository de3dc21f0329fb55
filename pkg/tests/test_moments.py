import mpmath
import pytest
from mpmath import mpc, mpf

from conftest import FAMILIES, HALF, n1_spec, n2_spec, n3_spec
from kleintrace import PrecisionConfig, QuantizationSpec, build_weight, moment_table
from kleintrace.errors import ValidationError
from kleintrace.moments import (
    clear_cache,
    shifted_measure_moments,
    trace_of_polynomial,
    verify_trace_axiom,
)
from kleintrace.polynomial import Polynomial
from kleintrace.positivity import corroborate_negative


def test_sech_moments(cfg):
    # T(z^r) = i^r int y^r sech(pi y)/2 dy
    M = moment_table(build_weight(n1_spec(), [1]), 4, cfg)
    assert abs(M[0] - HALF) < 1e-38
    assert abs(M[1]) < 1e-38
    assert abs(M[2] + mpf(1) / 8) < 1e-38
    assert abs(M[4] - mpf(5) / 32) < 1e-38
    assert max(M.error_estimates) < 1e-36


def test_y_moments_are_real_for_even_real_weight(cfg):
    m = moment_table(build_weight(n3_spec(), [0, 8]), 6, cfg).y_moments()
    assert all(abs(v.imag) < 1e-38 for v in m)
    assert all(m[k].real > 0 for k in (0, 2, 4, 6))


def test_cache_is_keyed_by_precision():
    clear_cache()
    w = build_weight(n1_spec(), [1])
    low = moment_table(w, 2, PrecisionConfig(precision_bits=128))
    high = moment_table(w, 2, PrecisionConfig(precision_bits=256))
    assert low.precision_bits == 128 and high.precision_bits == 256
    assert abs(high[0] - HALF) < 1e-38
    assert moment_table(w, 1, PrecisionConfig(precision_bits=256))[0] == high[0]


def test_atoms_add_point_masses(cfg):
    spec = QuantizationSpec([0, HALF, -HALF], c=HALF)
    plain = moment_table(build_weight(spec, [1]), 2, cfg)
    with_atom = moment_table(build_weight(spec, [1], [{"y": 0, "mass": 3}]), 2, cfg)
    assert abs(with_atom[0] - plain[0] - 3) < 1e-38
    assert abs(with_atom[2] - plain[2]) < 1e-38


def test_trace_of_polynomial_is_linear(cfg):
    w = build_weight(n1_spec(), [1])
    R = Polynomial([2, 0, 4])
    assert abs(trace_of_polynomial(w, R, cfg) - (2 * HALF - 4 * mpf(1) / 8)) < 1e-38


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_trace_axiom_on_monomials(name, cfg):
    make, G = FAMILIES[name]
    spec = make()
    w = build_weight(spec, G)
    for k in range(4):
        assert verify_trace_axiom(spec, w, Polynomial.monomial(k), cfg) < 1e-40


def test_trace_axiom_fails_for_wrong_twist(cfg):
    # the weight for c = 1/2 does not satisfy the axiom for c = 1/4
    w = build_weight(n1_spec(), [1])
    wrong = QuantizationSpec([0], c=mpf(1) / 4)
    assert verify_trace_axiom(wrong, w, Polynomial([1]), cfg) > 0.1


def test_degree_limit_and_bad_range(cfg):
    spec = n1_spec()
    w = build_weight(spec, [1])
    with pytest.raises(ValidationError):
        verify_trace_axiom(spec, w, Polynomial.monomial(7), cfg)
    with pytest.raises(ValidationError):
        moment_table(w, -1, cfg)


def test_shifted_measure_moments_positive(cfg):
    spec = n3_spec()
    m = shifted_measure_moments(spec, build_weight(spec, [0, 8]), 4, cfg).y_moments()
    assert m[0].real > 0 and abs(m[0].imag) < 1e-38
    assert mpmath.re(m[0] * m[2] - m[1] ** 2) > 0


@pytest.mark.parametrize("c", [mpf(1) / 4, mpf(1) / 3, mpf(2) / 3])
def test_n1_total_mass(c, cfg):
    M = moment_table(build_weight(QuantizationSpec([0], c=c), [1]), 0, cfg)
    assert abs(M[0] - 1 / (2 * mpmath.sin(mpmath.pi * c))) < 1e-38


def test_n3_total_mass_at_beta_one(cfg):
    w = build_weight(n3_spec(1), [0, 8])
    expected = 1 / (2 * mpmath.cosh(mpmath.pi / 2) ** 2 * mpmath.cosh(mpmath.pi))
    assert abs(trace_of_polynomial(w, Polynomial([1]), cfg) - expected) < 1e-38
    assert abs(trace_of_polynomial(w, Polynomial([0, 1]), cfg)) < 1e-38


def test_atom_only_weight(cfg):
    spec = QuantizationSpec([mpc(HALF, 0.3), mpc(-HALF, 0.3)], c=HALF)
    w = build_weight(spec, [0], [{"y": 0.3, "mass": 2}])
    value = trace_of_polynomial(w, Polynomial([0, 0, 1]), cfg)
    assert abs(value + mpf("0.18")) < 1e-15
    assert verify_trace_axiom(spec, w, Polynomial(), cfg) == 0


def test_n1_wrong_sign_shifted_measure_is_not_positive(cfg):
    assert corroborate_negative(n1_spec(epsilon=-1), [1], cfg=cfg, depth=4)


def test_even_n2_shifted_moments_real(cfg):
    spec = n2_spec()
    m = shifted_measure_moments(spec, build_weight(spec, [0, 1]), 6, cfg).y_moments()
    assert all(abs(v.imag) < 1e-38 for v in m)


def test_linearity(cfg):
    w = build_weight(n3_spec(), [0, 8])
    R1, R2 = Polynomial([1, 2, 0, 3]), Polynomial([0, -1, 5])
    a, b = mpf("0.7"), mpf("-2.5")
    lhs = trace_of_polynomial(w, R1 * a + R2 * b, cfg)
    rhs = a * trace_of_polynomial(w, R1, cfg) + b * trace_of_polynomial(w, R2, cfg)
    assert abs(lhs - rhs) < 1e-38


def test_precision_doubling_stays_within_error_estimate():
    w = build_weight(n3_spec(), [0, 8])
    low = moment_table(w, 6, PrecisionConfig(precision_bits=128))
    high = moment_table(w, 6, PrecisionConfig(precision_bits=256))
    for r in range(7):
        assert abs(low[r] - high[r]) <= max(low.error_estimates[r], mpf(2) ** -120)


def test_odd_moments_of_even_weights_vanish(cfg):
    for make, G in (FAMILIES["n3"], FAMILIES["n4"], FAMILIES["n1"]):
        M = moment_table(build_weight(make(), G), 21, cfg)
        for k in range(11):
            assert abs(M[2 * k + 1]) <= M.error_estimates[2 * k + 1] + mpf(2) ** -200
