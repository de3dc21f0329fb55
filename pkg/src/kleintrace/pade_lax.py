"""Pade approximants of the Stieltjes series and the 2x2 difference (Lax) matrices.

With ``Z_n = [[p_n, -q_n], [p_{n-1}, -q_{n-1}]]`` and the polynomial ``L`` of
the Stieltjes difference identity, the matrix

    A_n(x) = Z_n(x+1/2) [[1, L/(tP)], [0, 1/t]] Z_n(x-1/2)^{-1}

moves ``(p_n, p_{n-1})`` from ``x - 1/2`` to ``x + 1/2``.  Everything is kept
in cleared form: four polynomial numerators over the denominator ``P``.
"""

from dataclasses import dataclass

import mpmath
from mpmath import mpc, mpf

from .errors import DegeneratePade, SampleAtPole, ZeroNorm
from .orthopoly import verify_stieltjes_polynomiality
from .polynomial import Polynomial, coeff_distance

HALF = mpf(1) / 2


def _mat_mul(A, B):
    # 2x2 matrices as row-major 4-lists
    return [A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3],
            A[2] * B[0] + A[3] * B[2], A[2] * B[1] + A[3] * B[3]]


@dataclass(frozen=True)
class RationalMatrix2:
    """``[[e11, e12], [e21, e22]] / denominator`` with polynomial entries."""

    entries: tuple
    denominator: Polynomial

    def entry(self, i, j):
        return self.entries[2 * (i - 1) + (j - 1)]

    def __call__(self, x):
        d = self.denominator(x)
        return [[e(x) / d for e in self.entries[:2]], [e(x) / d for e in self.entries[2:]]]

    def det_numerator(self):
        e11, e12, e21, e22 = self.entries
        return e11 * e22 - e12 * e21


def pade_denominator(F, n):
    """Monic degree-``n`` denominator of the ``n``-th Pade approximant.

    Solves the Hankel system ``sum_j c_j M_{i+j} = -M_{i+n}``, ``i < n``.
    """
    if n == 0:
        return Polynomial([1])
    M = F.coefficients
    if F.order < 2 * n - 1:
        raise DegeneratePade(f"series order {F.order} too short for n = {n}")
    with mpmath.workprec(F.precision_bits):
        H = mpmath.matrix([[M[i + j] for j in range(n)] for i in range(n)])
        rhs = mpmath.matrix([-M[i + n] for i in range(n)])
        try:
            c = mpmath.lu_solve(H, rhs)
        except ZeroDivisionError as exc:
            raise DegeneratePade(f"Hankel system for n = {n} is singular") from exc
        return Polynomial([c[j] for j in range(n)] + [1])


def pade_numerator(F, p):
    """``q_n(x) = T((p_n(x) - p_n(z)) / (x - z))``."""
    n = p.degree
    M = F.coefficients
    with mpmath.workprec(F.precision_bits):
        coeffs = []
        for j in range(n):
            acc = mpc(0)
            for r in range(n - j):
                acc += p.coeff(j + r + 1) * M[r]
            coeffs.append(acc)
        return Polynomial(coeffs)


def series_product_tail(F, p, q, count):
    """Coefficients of ``x^{-1}, ..., x^{-count}`` in ``p F - q``."""
    M = F.coefficients
    out = []
    with mpmath.workprec(F.precision_bits):
        for k in range(1, count + 1):
            # x^{-k} collects p_j M_r with j - r - 1 = -k
            acc = mpc(0)
            for j, pj in enumerate(p.coeffs):
                r = j + k - 1
                if r <= F.order:
                    acc += pj * M[r]
                else:
                    raise ValueError("series order too short for requested tail")
            out.append(acc)
    return out


def norm_from_series(F, p):
    """``nu_n = T(p_n(z) z^n)``."""
    n = p.degree
    with mpmath.workprec(F.precision_bits):
        return mpmath.fsum(c * F.coefficients[j + n] for j, c in enumerate(p.coeffs))


def lax_matrix(p_n, p_nm1, q_n, q_nm1, P, t, L, N_nm1):
    """Cleared form of ``A_n``: numerators ``B`` with ``A_n = B / P``."""
    if N_nm1 == 0:
        raise ZeroNorm("N_{n-1} vanishes")
    tinv = 1 / t
    plus = [p_n.shift(HALF), -q_n.shift(HALF), p_nm1.shift(HALF), -q_nm1.shift(HALF)]
    minus_adj = [-q_nm1.shift(-HALF), q_n.shift(-HALF), -p_nm1.shift(-HALF), p_n.shift(-HALF)]
    mid = [P, L * tinv, Polynomial(), P * tinv]

    B = _mat_mul(_mat_mul(plus, mid), minus_adj)
    return RationalMatrix2(tuple(e / N_nm1 for e in B), P)


@dataclass(frozen=True)
class LaxData:
    n: int
    p_n: Polynomial
    p_nm1: Polynomial
    q_n: Polynomial
    q_nm1: Polynomial
    L: Polynomial
    N_nm1: object
    N_n: object
    A: RationalMatrix2


def build_lax(F, P, t, n):
    """Pade data and ``A_n`` for ``n >= 1`` straight from the Stieltjes series."""
    with mpmath.workprec(F.precision_bits):
        p_n = pade_denominator(F, n)
        p_nm1 = pade_denominator(F, n - 1)
        q_n = pade_numerator(F, p_n)
        q_nm1 = pade_numerator(F, p_nm1)
        L, _ = verify_stieltjes_polynomiality(F, P, t, tail_length=0)
        N_nm1 = norm_from_series(F, p_nm1)
        N_n = norm_from_series(F, p_n) if F.order >= 2 * n else None
        A = lax_matrix(p_n, p_nm1, q_n, q_nm1, P, t, L, N_nm1)
    return LaxData(n, p_n, p_nm1, q_n, q_nm1, L, N_nm1, N_n, A)


def _scale(polys):
    return max([mpf(1)] + [p.max_abs() for p in polys])


def det_residual(A, t):
    """Relative coefficient residual of ``det(B) - P^2 / t``."""
    target = A.denominator * A.denominator * (1 / t)
    e11, e12, e21, e22 = A.entries
    scale = _scale([e11 * e22, e12 * e21, target])
    return coeff_distance(A.det_numerator(), target) / scale


def det_y_residual(lax):
    """``det Y_n = p_{n-1} q_n - p_n q_{n-1}`` compared with ``N_{n-1}``."""
    d = lax.p_nm1 * lax.q_n - lax.p_n * lax.q_nm1
    return coeff_distance(d, Polynomial([lax.N_nm1])) / _scale([lax.p_nm1 * lax.q_n, lax.p_n * lax.q_nm1])


def verify_difference_equation(A, p_n, p_nm1, samples):
    """Max relative residual of ``(p_n, p_{n-1})(x+1/2) = A(x) (p_n, p_{n-1})(x-1/2)``."""
    worst = mpf(0)
    for x in samples:
        x = mpc(x)
        d = A.denominator(x)
        if abs(d) < mpf(2) ** (-mpmath.mp.prec // 4):
            raise SampleAtPole(f"sample {x} is at a root of P")
        m = A(x)
        lo = (p_n(x - HALF), p_nm1(x - HALF))
        hi = (p_n(x + HALF), p_nm1(x + HALF))
        for i in range(2):
            rhs = m[i][0] * lo[0] + m[i][1] * lo[1]
            mag = max(abs(hi[i]), abs(m[i][0] * lo[0]), abs(m[i][1] * lo[1]), mpf(1))
            worst = max(worst, abs(hi[i] - rhs) / mag)
    return worst


def series_at_infinity(num, den, count, top=None):
    """Expansion ``num/den = sum_k c_k x^{e-k}`` with ``e = top - deg den``.

    ``top`` defaults to ``deg num``.  Coefficients of ``num`` above ``top``
    are treated as round-off and ignored.  Returns ``(e, [c_0, ...])``.
    """
    top = num.degree if top is None else top
    if num.is_zero() or top < 0:
        return 0, [mpc(0)] * count
    e = top - den.degree
    # long division in descending powers
    rem = [num.coeff(top - k) for k in range(top + 1)]
    d = list(reversed(den.coeffs))
    out = []
    for k in range(count):
        lead = rem[k] if k < len(rem) else 0
        c = lead / d[0]
        out.append(c)
        for j, dj in enumerate(d):
            idx = k + j
            while idx >= len(rem):
                rem.append(0)
            rem[idx] -= c * dj
    return e, out


def expansion(A, i, j, max_power=3):
    """Coefficients ``{k: c}`` of ``x^{-k}`` (``0 <= k <= max_power``) of entry ``(i, j)``.

    The entries of ``A_n`` are bounded at infinity, so numerator terms above
    ``deg P`` are cancellation noise; see :func:`growth_residual`.
    """
    top = A.denominator.degree
    e, cs = series_at_infinity(A.entry(i, j), A.denominator, max_power + 1, top=top)
    return {k: cs[k] for k in range(max_power + 1)}


def growth_residual(A):
    """Relative size of numerator coefficients above ``deg P`` (zero in exact arithmetic)."""
    top = A.denominator.degree
    worst = mpf(0)
    for e in A.entries:
        extra = [abs(e.coeff(k)) for k in range(top + 1, e.degree + 1)]
        if extra:
            worst = max(worst, max(extra) / max(e.max_abs(), mpf(1)))
    return worst


def asymptotic_extract(A):
    """Leading coefficients of ``A_n`` at infinity, keyed ``c{ij}_{k}`` for ``x^{-k}``."""
    out = {}
    for i in (1, 2):
        for j in (1, 2):
            for k, c in expansion(A, i, j, 2).items():
                out[f"c{i}{j}_{k}"] = c
    return out


def expected_asymptotics(n, t, a_n):
    """The leading terms the Lax matrix must have.

    ``t != 1``: ``A11 = 1 + n/x``, ``A12 = -(1 - 1/t) a_n / x``,
    ``A21 = (1 - 1/t)/x``, ``A22 = 1/t - n/(t x)``.  For ``t = 1`` the first
    order off-diagonal terms vanish and ``A21 = (2n-1)/x^2``,
    ``A12 = -(2n+1) a_n / x^2``.
    """
    tinv = 1 / t
    exp = {"c11_0": 1, "c11_1": n, "c22_0": tinv, "c22_1": -n * tinv,
           "c21_0": 0, "c12_0": 0}
    if abs(t - 1) > mpf(2) ** (-mpmath.mp.prec // 2):
        exp["c21_1"] = 1 - tinv
        exp["c12_1"] = -(1 - tinv) * a_n
    else:
        exp["c21_1"] = 0
        exp["c12_1"] = 0
        exp["c21_2"] = 2 * n - 1
        exp["c12_2"] = -(2 * n + 1) * a_n
    return exp


def transfer_residual(A_n, A_np1, a_n, b_n):
    """``a_n A_{n+1} = T(x+1/2) A_n adj T(x-1/2)`` in cleared form, relative."""
    x = Polynomial([0, 1])
    T_plus = [x + HALF - b_n, Polynomial([-a_n]), Polynomial([1]), Polynomial()]
    adj_minus = [Polynomial(), Polynomial([a_n]), Polynomial([-1]), x - HALF - b_n]
    e = list(A_n.entries)

    rhs = _mat_mul(_mat_mul(T_plus, e), adj_minus)
    lhs = [a_n * v for v in A_np1.entries]
    worst = mpf(0)
    for l, r in zip(lhs, rhs):
        worst = max(worst, coeff_distance(l, r) / _scale([l, r]))
    return worst
