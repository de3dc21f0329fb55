"""Monic orthogonal polynomials of a trace and related moment-sequence tools.

The bilinear form is ``(f, g) = T(f g)`` in the variable ``x`` of the
imaginary axis.  For a positive measure in ``y = -ix`` the norms ``nu_k``
alternate in sign and every ``a_k`` is negative.

``RecurrenceCoeffs.a`` is indexed so that ``a[k] = a_k``; ``a[0]`` is a
placeholder zero (there is no ``p_{-1}`` term).
"""

from dataclasses import dataclass
from math import comb

import mpmath
from mpmath import mpc, mpf

from .config import PrecisionConfig
from .errors import DegenerateTrace, InsufficientMoments, PrecisionUnreachable
from .moments import MomentTable, moment_table
from .polynomial import Polynomial

_I_POW = (mpc(1), mpc(0, 1), mpc(-1), mpc(0, -1))


@dataclass(frozen=True)
class RecurrenceCoeffs:
    a: tuple
    b: tuple
    norms: tuple
    K: int
    precision_bits: int = 256


@dataclass(frozen=True)
class StieltjesSeries:
    """Formal series ``sum_r coefficients[r] * x**(-r-1)``."""

    coefficients: tuple
    order: int
    precision_bits: int = 256


def _values(M):
    return list(M.values) if isinstance(M, MomentTable) else list(M)


def _prec(M):
    return M.precision_bits if isinstance(M, MomentTable) else mpmath.mp.prec


def hankel_determinants(M, K):
    """``[D_1, ..., D_K]`` with ``D_k = det(M_{i+j})_{0 <= i,j < k}``."""
    vals = _values(M)
    if len(vals) < 2 * K - 1:
        raise InsufficientMoments(f"need {2 * K - 1} moments for D_{K}, have {len(vals)}")
    with mpmath.workprec(_prec(M)):
        out = []
        for k in range(1, K + 1):
            mat = mpmath.matrix([[vals[i + j] for j in range(k)] for i in range(k)])
            out.append(mpmath.det(mat))
    return out


def _pairing(f, g, vals):
    acc = mpc(0)
    for i, fi in enumerate(f.coeffs):
        if fi == 0:
            continue
        for j, gj in enumerate(g.coeffs):
            acc += fi * gj * vals[i + j]
    return acc


def orthogonal_polynomials(M, K, rtol=None):
    """Stieltjes procedure on the moment functional.

    Returns ``(polys, a, b, norms)`` with ``polys = [p_0 .. p_{K+1}]``.  Needs
    ``M_0 .. M_{2K+1}``.
    """
    vals = _values(M)
    if len(vals) < 2 * K + 2:
        raise InsufficientMoments(f"need {2 * K + 2} moments for K = {K}, have {len(vals)}")
    with mpmath.workprec(_prec(M)):
        rtol = mpf(2) ** (-_prec(M) // 2) if rtol is None else mpf(rtol)
        x = Polynomial([0, 1])
        polys = [Polynomial([1])]
        a, b, norms = [mpc(0)], [], []
        prev = Polynomial()
        for k in range(K + 1):
            p = polys[k]
            nu = _pairing(p, p, vals)
            ref = max(abs(c) for c in p.coeffs) ** 2 * max(abs(v) for v in vals[:2 * k + 1])
            if abs(nu) <= rtol * ref:
                raise DegenerateTrace(f"norm nu_{k} vanishes (|nu| = {mpmath.nstr(abs(nu), 5)})")
            norms.append(nu)
            if k:
                a.append(nu / norms[k - 1])
            bk = _pairing(x * p, p, vals) / nu
            b.append(bk)
            nxt = (x - bk) * p - (a[k] * prev if k else Polynomial())
            prev = p
            polys.append(nxt)
    return polys, a, b, norms


def recurrence_coeffs(M, K):
    """``a_1..a_K`` (as ``a[1:]``), ``b_0..b_K`` and ``nu_0..nu_K``."""
    _, a, b, norms = orthogonal_polynomials(M, K)
    return RecurrenceCoeffs(a=tuple(a), b=tuple(b), norms=tuple(norms), K=K,
                            precision_bits=_prec(M))


def stable_recurrence(w, K, cfg=None):
    """Recurrence coefficients with precision doubling until ``a_K`` settles.

    Moments are recomputed at each precision; raises ``PrecisionUnreachable``
    once ``cfg.max_recurrence_bits`` is exceeded.
    """
    cfg = cfg or PrecisionConfig()
    current = cfg
    prev = None
    while True:
        try:
            rc = recurrence_coeffs(moment_table(w, 2 * K + 1, current), K)
        except DegenerateTrace:
            rc = None
        if rc is not None and prev is not None:
            with mpmath.workprec(current.precision_bits):
                scale = max(abs(rc.a[K]) if K else abs(rc.b[K]), mpf(1))
                ref = rc.a[K] if K else rc.b[K]
                old = prev.a[K] if K else prev.b[K]
                if abs(ref - old) <= cfg.recurrence_rtol * scale:
                    return prev
        prev = rc
        nxt = current.doubled()
        if nxt.precision_bits > cfg.max_recurrence_bits:
            raise PrecisionUnreachable(
                f"recurrence depth K = {K} not stable below {cfg.max_recurrence_bits} bits")
        current = nxt


def orthopoly_coeffs(rc, k):
    """Monic ``p_k`` as a :class:`Polynomial` from the recurrence."""
    x = Polynomial([0, 1])
    prev, cur = Polynomial(), Polynomial([1])
    for j in range(k):
        prev, cur = cur, (x - rc.b[j]) * cur - (rc.a[j] * prev if j else Polynomial())
    return cur


def eval_orthopoly(rc, k, x):
    """``p_k(x)`` by forward recurrence."""
    if k > rc.K + 1:
        raise ValueError(f"k = {k} exceeds available depth {rc.K + 1}")
    prev, cur = 0, 1
    for j in range(k):
        prev, cur = cur, (x - rc.b[j]) * cur - (rc.a[j] * prev if j else 0)
    return cur


def y_variable_poly(rc, k):
    """``P_k(y) = i^k p_k(-iy)``: the view used for classical families."""
    p = orthopoly_coeffs(rc, k)
    ik = _I_POW[k % 4]
    return Polynomial([ik * c * _I_POW[(-j) % 4] for j, c in enumerate(p.coeffs)])


def y_variable_coeffs(rc):
    """Recurrence ``P_{k+1} = (y - beta_k) P_k - gamma_k P_{k-1}`` in ``y``.

    ``beta_k = i b_k`` and ``gamma_k = -a_k``.
    """
    beta = [1j * bk for bk in rc.b]
    gamma = [-ak for ak in rc.a]
    return beta, gamma


def star_product_row(rc, k):
    """Coefficients of ``z^{k+1}, z^k, z^{k-1}`` in ``z * z^k``."""
    return (1, rc.b[k], rc.a[k] if k else 0)


def stieltjes_series(M, order):
    vals = _values(M)
    if len(vals) < order + 1:
        raise InsufficientMoments(f"need {order + 1} moments, have {len(vals)}")
    return StieltjesSeries(tuple(vals[:order + 1]), order, _prec(M))


def shifted_series(F, a):
    """Coefficients of ``F(x + a)`` in powers ``x^{-m-1}``, ``m <= order``."""
    M = F.coefficients
    out = []
    for m in range(F.order + 1):
        acc = 0
        neg = -a
        for r in range(m + 1):
            acc += comb(m, r) * neg ** (m - r) * M[r]
        out.append(acc)
    return out


def difference_series(F, t):
    """``F(x + 1/2) - t F(x - 1/2)`` as coefficients of ``x^{-m-1}``."""
    half = mpf(1) / 2
    plus = shifted_series(F, half)
    minus = shifted_series(F, -half)
    return [p - t * q for p, q in zip(plus, minus)]


def verify_stieltjes_polynomiality(F, P, t, tail_length=8):
    """Polynomial part ``L`` of ``P(x)(F(x+1/2) - t F(x-1/2))`` and its tail size.

    The coefficient of ``x^j`` is known exactly for ``j >= deg P - 1 - order``;
    ``tail_length`` of the negative powers are checked (all known ones when
    ``None``).
    """
    n = P.degree
    avail = F.order - n + 1
    tail_length = avail if tail_length is None else tail_length
    if tail_length > avail:
        raise InsufficientMoments(f"series order {F.order} too short for {tail_length} tail terms")
    with mpmath.workprec(F.precision_bits):
        g = difference_series(F, t)

        def coeff(j):
            acc = 0
            for k, pk in enumerate(P.coeffs):
                m = k - j - 1
                if 0 <= m <= F.order:
                    acc += pk * g[m]
            return acc

        L = Polynomial([coeff(j) for j in range(n)])
        tail = [abs(coeff(-j)) for j in range(1, tail_length + 1)]
        return L, max(tail, default=mpf(0))


def reconstruct_moments(L, P, t, r_max):
    """Invert ``F -> P(x)(F(x+1/2) - t F(x-1/2))`` given its polynomial part ``L``.

    The map is triangular on ``x^{-1} C[[x^{-1}]]``: the diagonal is ``1 - t``,
    or ``-m`` one step below the diagonal when ``t = 1``.
    """
    n = P.degree
    if P.leading != 1:
        raise ValueError("P must be monic")
    is_one = abs(t - 1) < mpf(2) ** (-mpmath.mp.prec // 2)
    m_needed = r_max + 1 if is_one else r_max
    g = []
    for m in range(m_needed + 1):
        j = n - 1 - m
        rhs = L.coeff(j) if j >= 0 else 0
        for k in range(n):
            idx = k - j - 1
            if 0 <= idx < m:
                rhs -= P.coeff(k) * g[idx]
        g.append(rhs)
    half = mpf(1) / 2

    def kernel(m, r):
        d = m - r
        return comb(m, r) * ((-half) ** d - t * half ** d)

    M = []
    if not is_one:
        for m in range(r_max + 1):
            acc = g[m] - sum(kernel(m, r) * M[r] for r in range(m))
            M.append(acc / (1 - t))
    else:
        for m in range(1, r_max + 2):
            acc = g[m] - sum(kernel(m, r) * M[r] for r in range(m - 1))
            M.append(-acc / m)
    return M
