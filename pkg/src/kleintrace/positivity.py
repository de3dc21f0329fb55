"""Cones of positive traces and positivity decisions for individual traces.

A trace is positive when both ``w`` and the shifted density
``lam P(x) w(x + 1/2)`` are nonnegative on the imaginary axis and every atom
mass is nonnegative.  On the numerator ``G`` these become sign conditions
on the real line, which are decided exactly here: every coefficient (an
``mpf`` is a dyadic rational) is converted to a sympy ``Rational`` and real
roots are counted with Sturm sequences.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import sympy
from mpmath import mp, mpc, mpf

from .config import PrecisionConfig
from .errors import DegenerateTrace, KleinTraceError, NonRealCoefficients, RealityViolated, ValidationError
from .moments import moment_table, shifted_measure
from .orthopoly import hankel_determinants
from .params import check_reality, circ_roots, closed_strip_roots, group_roots, reduce_to_strip
from .polynomial import Polynomial
from .weight import build_weight

EPS_PLUS = "eps_plus"
EPS_MINUS = "eps_minus"

POSITIVE = "Positive"
EMPTY_CONE = "EmptyCone"
PHI_NONZERO = "PhiNonzero"
AXIS_POLES = "AxisPoles"
ZERO_DENSITY = "ZeroDensity"
SIGN_CONDITION = "SignCondition"
NEGATIVE_ATOM = "NegativeAtom"

_X = sympy.Symbol("X")


@dataclass(frozen=True)
class ConeSpec:
    """Cone of positive traces for one ``(P, c, epsilon)``.

    ``degree_bound`` is the largest allowed ``deg G`` (``G`` over the
    open-strip part of ``P``); ``dimension_mod_scaling`` is ``-1`` for an
    empty cone.
    """

    degree_bound: int
    require_G0_zero: bool
    sign_mode: str
    atom_count: int
    dimension_mod_scaling: int
    generators: tuple = ()
    interior_count: int = 0
    epsilon: int = 1
    c: mpf = mpf(0)
    reduced_degree: int = 0


@dataclass(frozen=True)
class PositivityVerdict:
    positive: bool
    certificate: str
    reason: str
    epsilon_reduced: int
    hankel_base: tuple | None = None
    hankel_shifted: tuple | None = None
    hankel_agrees: bool | None = None
    details: dict = field(default_factory=dict)


def _rational(v):
    if isinstance(v, (int, Fraction)):
        return sympy.Rational(v)
    if isinstance(v, sympy.Rational):
        return v
    if isinstance(v, mpc):
        if v.imag != 0:
            raise NonRealCoefficients(f"coefficient {v} is not real")
        v = v.real
    if isinstance(v, complex):
        if v.imag != 0:
            raise NonRealCoefficients(f"coefficient {v} is not real")
        v = v.real
    if isinstance(v, float):
        return sympy.Rational(Fraction(v))
    v = mp.mpmathify(v)
    if isinstance(v, mpc):
        return _rational(v)
    if not mpmath.isfinite(v):
        raise ValidationError(f"coefficient {v} is not finite")
    # exact and signed (``man_exp`` drops the sign under the gmpy backend)
    p, q = mpmath.libmp.to_rational(v._mpf_)
    return sympy.Rational(int(p), int(q))


def _sympy_poly(coeffs):
    return sympy.Poly([_rational(c) for c in reversed(list(coeffs))] or [0], _X, domain="QQ")


def _nonnegative_on_reals(poly):
    """Exact test ``poly >= 0`` on the real line (``poly`` nonzero)."""
    if poly.is_zero:
        return True
    _, factors = poly.sqf_list()
    for f, mult in factors:
        if mult % 2 and f.degree() > 0 and f.count_roots() > 0:
            return False
    # the sign is now constant away from the roots, so the leading term decides
    return bool(poly.LC() > 0)


def is_positive_G(G, epsilon, c):
    """Exact sign decision for the numerator ``G``.

    ``epsilon = +1``: ``G >= 0`` on the real line, ``G(0) = 0`` when
    ``c = 0``.  ``epsilon = -1``: ``G(0) = 0`` and ``G/X >= 0``.  The zero
    polynomial is never positive.
    """
    coeffs = G.coeffs if isinstance(G, Polynomial) else tuple(G)
    poly = _sympy_poly(coeffs)
    if poly.is_zero:
        return False
    zero_at_origin = poly.eval(0) == 0
    if epsilon == -1:
        if not zero_at_origin:
            return False
        quotient, rem = poly.div(sympy.Poly(_X, _X, domain="QQ"))
        return rem.is_zero and _nonnegative_on_reals(quotient)
    if epsilon != 1:
        raise ValidationError("epsilon must be +1 or -1")
    if c == 0 and not zero_at_origin:
        return False
    return _nonnegative_on_reals(poly)


def _effective(d):
    # nonnegative polynomials of degree <= d have even degree <= this
    if d < 0:
        return -1
    return d if d % 2 == 0 else d - 1


def _generators(shift, e):
    """Extreme-ray examples ``X^shift * q^2`` with ``q`` real-rooted of degree <= e/2."""
    if e < 0:
        return ()
    base = Polynomial.monomial(shift)
    if e == 0:
        return (base,)
    m = e // 2
    out = [base]
    for s in (0, 1, -1):
        out.append(base * Polynomial([-s, 1]) ** (2 * m))
    uniq = []
    for g in out:
        if all(g != h for h in uniq):
            uniq.append(g)
    return tuple(uniq)


def _closed_strip_counts(spec):
    kept = circ_roots(spec.roots)
    pstar, q_roots = closed_strip_roots(kept)
    return len(pstar), len(group_roots(q_roots))


def cone_description(spec):
    """Shape and dimension of the cone of positive traces for ``spec``.

    Roots outside the strip are discarded first (with the induced sign of the
    conjugation); boundary roots contribute one nonnegative atom each.
    """
    if not check_reality(spec):
        raise RealityViolated("roots are not closed under alpha -> -conj(alpha)")
    reduced = reduce_to_strip(spec)
    ell, r = _closed_strip_counts(reduced)
    eps, c = reduced.epsilon, reduced.c
    if eps == -1:
        d, shift, mode, g0 = ell - 2, 1, EPS_MINUS, True
    elif c != 0:
        d, shift, mode, g0 = ell - 1, 0, EPS_PLUS, False
    else:
        d, shift, mode, g0 = ell - 3, 2, EPS_PLUS, True
    e = _effective(d)
    dim = e + r if e >= 0 else -1
    return ConeSpec(degree_bound=ell - 1, require_G0_zero=g0, sign_mode=mode, atom_count=r,
                    dimension_mod_scaling=dim, generators=_generators(shift, e),
                    interior_count=ell, epsilon=eps, c=c, reduced_degree=reduced.n)


def even_cone_dimension(n, epsilon):
    """Dimension modulo scaling of the cone of positive even traces (``-1``: empty)."""
    if n < 1:
        raise ValidationError("n must be positive")
    if epsilon not in (1, -1):
        raise ValidationError("epsilon must be +1 or -1")
    if n % 2:
        return (n - 3) // 2 if epsilon == -1 else (n - 1) // 2
    return (n - 2) // 2 if epsilon == -1 else (n - 4) // 2


def axis_factor(q_roots):
    """``prod (X - exp(-2 pi q))^2`` over the distinct imaginary roots ``i q`` of ``Q``."""
    f = Polynomial([1])
    for q, _ in group_roots(q_roots):
        f = f * Polynomial([-mpmath.exp(-2 * mpmath.pi * mpc(q).imag), 1]) ** 2
    return f


def _divide_out_axis(G, q_roots):
    """``G / axis_factor`` or ``None`` if ``w`` keeps a pole on the axis."""
    factor = axis_factor(q_roots)
    if factor.degree <= 0:
        return G
    quo, rem = G.divmod(factor)
    tol = mpf(2) ** (-mp.prec // 2) * max(G.max_abs(), mpf(1))
    if rem.max_abs() > tol:
        return None
    # drop cancellation noise so the exact sign test sees the intended zeros
    scale = quo.max_abs()
    return Polynomial([0 if abs(v) <= tol * max(scale, 1) else v for v in quo.coeffs]).real()


def _hankel_positive(dets):
    return all(mpmath.re(d) > 0 for d in dets)


def hankel_corroboration(spec, w, cfg=None, depth=None):
    """Hankel determinants (``k = 1..depth``) of the base and shifted measures in ``y``."""
    cfg = cfg or PrecisionConfig()
    depth = cfg.hankel_depth if depth is None else depth
    base = moment_table(w, 2 * depth - 2, cfg)
    shifted = moment_table(shifted_measure(spec, w), 2 * depth - 2, cfg)
    with mpmath.workprec(cfg.precision_bits):
        hb = hankel_determinants(base.y_moments(), depth)
        hs = hankel_determinants(shifted.y_moments(), depth)
    return tuple(hb), tuple(hs)


def decide_positivity(spec, G, atoms=(), cfg=None, phi=None, full_denominator=False,
                      corroborate=True):
    """Decide whether the trace ``(G, atoms)`` for ``spec`` is positive.

    ``G`` is taken over the open-strip part of ``P`` (as in
    :func:`~kleintrace.weight.build_weight`).  With ``full_denominator=True``
    it is taken over the exponentiated closed-strip polynomial instead, so
    that boundary roots of ``P`` put double poles on the axis unless ``G``
    cancels them.  ``phi`` lists coefficients of a functional supported off
    the axis; any nonzero entry rules positivity out.

    The certificate names the first failing condition, or ``Positive``.
    """
    cfg = cfg or PrecisionConfig()
    with mpmath.workprec(cfg.precision_bits):
        if not check_reality(spec):
            raise RealityViolated("roots are not closed under alpha -> -conj(alpha)")
        reduced = reduce_to_strip(spec)
        eps = reduced.epsilon
        G = G if isinstance(G, Polynomial) else Polynomial([mp.mpmathify(v) for v in G])
        if not G.is_real():
            raise NonRealCoefficients("G must have real coefficients")
        G = G.real()

        def verdict(ok, cert, reason, **kw):
            return PositivityVerdict(ok, cert, reason, eps, **kw)

        if phi is not None and any(v != 0 for v in phi):
            return verdict(False, PHI_NONZERO, "a functional supported off the axis is present")
        cone = cone_description(reduced)
        if cone.dimension_mod_scaling < 0:
            return verdict(False, EMPTY_CONE, "no positive traces exist for this (P, c, epsilon)")
        if full_denominator:
            q_roots = closed_strip_roots(circ_roots(reduced.roots))[1]
            G_star = _divide_out_axis(G, q_roots)
            if G_star is None:
                return verdict(False, AXIS_POLES, "the weight has poles on the imaginary axis")
            G = G_star
        w = build_weight(reduced, G, atoms)
        if G.is_zero():
            return verdict(False, ZERO_DENSITY, "the density part vanishes")
        if not is_positive_G(G, eps, reduced.c):
            return verdict(False, SIGN_CONDITION, f"G violates the {cone.sign_mode} sign condition")
        negative = [m for _, m in w.atoms if m < 0]
        if negative:
            return verdict(False, NEGATIVE_ATOM, f"atom mass {mpmath.nstr(negative[0], 8)} < 0")

        hb = hs = agrees = None
        if corroborate:
            try:
                hb, hs = hankel_corroboration(reduced, w, cfg)
                agrees = _hankel_positive(hb) and _hankel_positive(hs)
            except (KleinTraceError, DegenerateTrace):
                agrees = False
        return verdict(True, POSITIVE, "all conditions hold", hankel_base=hb,
                       hankel_shifted=hs, hankel_agrees=agrees,
                       details={"G": G, "dimension": cone.dimension_mod_scaling})


def corroborate_negative(spec, G, atoms=(), cfg=None, depth=8):
    """For a trace judged not positive: does some Hankel determinant fail?

    Returns ``True`` when a determinant of either measure is ``<= 0`` or the
    weight cannot be built at all (a structural failure).
    """
    cfg = cfg or PrecisionConfig()
    with mpmath.workprec(cfg.precision_bits):
        reduced = reduce_to_strip(spec)
        try:
            w = build_weight(reduced, G, atoms)
            if w.G.is_zero():
                return True
            hb, hs = hankel_corroboration(reduced, w, cfg, depth)
        except KleinTraceError:
            return True
    return not (_hankel_positive(hb) and _hankel_positive(hs))

