import random

import mpmath
import pytest
from mpmath import mpc, mpf

from conftest import HALF, n1_spec, n3_spec
from kleintrace import QuantizationSpec, check_reality, derive_constants, reduce_to_strip
from kleintrace.errors import UnpairedBoundaryRoot, ValidationError
from kleintrace.params import (
    circ_roots,
    classify_strip,
    closed_strip_roots,
    exponentiate,
    factor_closed_strip,
    group_roots,
    i_pow_neg,
    shift_to_strip,
    shifted_roots,
)
from kleintrace.polynomial import Polynomial, coeff_distance


@pytest.mark.parametrize("kwargs", [dict(c=1), dict(c=-0.1), dict(c=0.2j), dict(epsilon=0)])
def test_invalid_specs(kwargs):
    with pytest.raises(ValidationError):
        QuantizationSpec([0], **kwargs)


def test_empty_roots_rejected():
    with pytest.raises(ValidationError):
        QuantizationSpec([])


@pytest.mark.parametrize("spec", [n1_spec(), n3_spec(), QuantizationSpec([0, 0], c=0.3, epsilon=-1)])
def test_constants_satisfy_their_relations(spec):
    t, lam, lam_star = derive_constants(spec)
    assert abs(t - mpmath.expjpi(2 * spec.c)) < 1e-70
    assert abs(lam * lam_star - (-1) ** spec.n) < 1e-70
    eps = mpmath.mpc(0, 1) ** spec.n * mpmath.expjpi(spec.c) * lam
    assert abs(eps - spec.epsilon) < 1e-70


def test_i_pow_neg():
    for n in range(-5, 6):
        assert abs(i_pow_neg(n) - mpc(0, 1) ** (-n)) < 1e-70


def test_reality_condition():
    assert check_reality(QuantizationSpec([mpc(0.2, 1), mpc(-0.2, 1), 0.5j]))
    assert not check_reality(QuantizationSpec([mpc(0.2, 1)]))
    assert not check_reality(QuantizationSpec([mpc(0.2, 1), mpc(-0.2, -1)]))


def test_strip_classification_and_shift():
    spec = QuantizationSpec([0, HALF, -HALF, mpc(1.7, 0.1), mpc(-1.7, 0.1)])
    cls = classify_strip(spec)
    assert len(cls.interior) == 1 and len(cls.boundary_plus) == 1
    assert len(cls.boundary_minus) == 1 and len(cls.outside) == 2
    moved = shifted_roots(spec.roots)
    assert all(abs(r.real) <= HALF for r in moved)
    assert abs(moved[3] - mpc(-0.3, 0.1)) < 1e-15


def test_reduce_to_strip_drops_outside_pairs_and_keeps_sign():
    spec = QuantizationSpec([0.3j, mpc(0.9, 0.2), mpc(-0.9, 0.2)], c=HALF, epsilon=-1)
    reduced = reduce_to_strip(spec)
    assert reduced.n == 1 and reduced.epsilon == -1
    with pytest.raises(ValidationError):
        reduce_to_strip(QuantizationSpec([mpc(0.9, 0), mpc(-0.9, 0)]))


def test_closed_strip_factorization():
    spec = QuantizationSpec([0, mpc(HALF, 0.25), mpc(-HALF, 0.25)])
    pstar, q = factor_closed_strip(spec)
    assert pstar.degree == 1 and q.degree == 1
    x = mpf("0.37")
    assert abs(spec.P(x) - pstar(x) * q(x + HALF) * q(x - HALF)) < 1e-70
    with pytest.raises(UnpairedBoundaryRoot):
        closed_strip_roots([mpc(HALF, 0.25), mpc(-HALF, 0.5)])


def test_group_roots_and_exponentiation():
    assert group_roots([mpc(0), mpc(1e-14), mpc(1)]) == [(mpc(0), 2), (mpc(1), 1)]
    P = exponentiate(QuantizationSpec([0.25j]))
    # root X = -exp(2 pi i * 0.25 i) = -exp(-pi/2)
    assert abs(P(-mpmath.exp(-mpmath.pi / 2))) < 1e-70


def test_constants_examples():
    t, lam, lam_star = derive_constants(QuantizationSpec([1j, -1j], c=0, epsilon=-1))
    assert abs(t - 1) < 1e-70 and abs(lam - 1) < 1e-70 and abs(lam_star - 1) < 1e-70
    t, lam, lam_star = derive_constants(n3_spec())
    assert abs(t + 1) < 1e-70 and abs(lam + 1) < 1e-70 and abs(lam_star - 1) < 1e-70
    t, lam, _ = derive_constants(QuantizationSpec([0], c=mpf(1) / 4))
    assert abs(t - 1j) < 1e-70 and abs(abs(lam) - 1) < 1e-70


def test_reality_examples():
    beta = mpf("0.7")
    assert check_reality(QuantizationSpec([1j * beta, -1j * beta]))
    assert check_reality(QuantizationSpec([0, 1j * beta, -1j * beta]))
    assert not check_reality(QuantizationSpec([mpf("0.3")]))


def test_classification_examples():
    assert len(classify_strip(QuantizationSpec([0, 1j])).interior) == 2
    assert classify_strip(QuantizationSpec([mpc(HALF, 1)])).boundary_plus == [mpc(HALF, 1)]
    assert classify_strip(QuantizationSpec([mpf(3) / 2])).outside == [mpc(1.5)]


def test_shift_examples():
    P_tilde, P_circ = shift_to_strip(QuantizationSpec([mpf(3) / 2]))
    assert P_tilde == Polynomial([-HALF, 1]) and P_circ == Polynomial([1])
    spec = n3_spec()
    P_tilde, P_circ = shift_to_strip(spec)
    assert P_tilde == spec.P and P_circ == spec.P
    P_tilde, P_circ = shift_to_strip(QuantizationSpec([mpf(-3) / 2, mpf(3) / 2]))
    assert coeff_distance(P_tilde, Polynomial([-mpf(1) / 4, 0, 1])) < 1e-70
    assert P_circ.degree == 0


def test_factorization_examples():
    pstar, q = factor_closed_strip(QuantizationSpec([HALF, -HALF]))
    assert pstar == Polynomial([1]) and q == Polynomial([0, 1])
    pstar, q = factor_closed_strip(QuantizationSpec([0]))
    assert pstar == Polynomial([0, 1]) and q == Polynomial([1])
    pstar, q = factor_closed_strip(QuantizationSpec([mpc(HALF, 1), mpc(-HALF, 1)]))
    assert pstar == Polynomial([1]) and coeff_distance(q, Polynomial([-1j, 1])) < 1e-70


def test_exponentiate_examples():
    assert exponentiate(QuantizationSpec([0])) == Polynomial([1, 1])
    beta = mpf("0.4")
    expected = (Polynomial([mpmath.exp(2 * mpmath.pi * beta), 1])
                * Polynomial([mpmath.exp(-2 * mpmath.pi * beta), 1]))
    assert coeff_distance(exponentiate(QuantizationSpec([1j * beta, -1j * beta])), expected) < 1e-60
    e = mpmath.exp(2 * mpmath.pi)
    expected = Polynomial([1, 1]) * Polynomial([e, 1]) * Polynomial([1 / e, 1])
    assert coeff_distance(exponentiate(QuantizationSpec([0, 1j, -1j])), expected) < 1e-60


def _random_roots(rng, symmetric):
    roots = []
    for _ in range(rng.randint(1, 4)):
        z = mpc(rng.uniform(-3, 3), rng.uniform(-1, 1))
        roots += [z, -mpmath.conj(z)] if symmetric else [z]
    return roots


def test_randomized_root_invariants():
    rng = random.Random(11)
    for k in range(40):
        spec = QuantizationSpec(_random_roots(rng, symmetric=k % 2 == 0))
        moved = QuantizationSpec(shifted_roots(spec.roots))
        assert not classify_strip(moved).outside
        # brute-force shift: subtract round-towards-zero integers until inside
        for r, m in zip(spec.roots, moved.roots):
            brute = r
            while brute.real > HALF:
                brute -= 1
            while brute.real < -HALF:
                brute += 1
            assert abs(brute - m) < 1e-60
        P_tilde, P_circ = shift_to_strip(spec)
        assert P_tilde.degree == spec.n and P_circ.degree == len(circ_roots(spec.roots))
        assert exponentiate(spec).is_real(1e-50) == check_reality(spec)


def test_closed_strip_reconstruction_random():
    rng = random.Random(4)
    for _ in range(10):
        roots = []
        for _ in range(rng.randint(0, 2)):
            y = mpf(rng.uniform(-1, 1))
            roots += [mpc(HALF, y), mpc(-HALF, y)]
        roots += [mpc(rng.uniform(-0.4, 0.4), rng.uniform(-1, 1)) for _ in range(rng.randint(1, 3))]
        spec = QuantizationSpec(roots)
        pstar, q = factor_closed_strip(spec)
        rebuilt = pstar * q.shift(HALF) * q.shift(-HALF)
        assert coeff_distance(rebuilt, spec.P) < 1e-30
