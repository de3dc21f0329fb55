"""Nonlinear (discrete Painleve type) recurrences for two families of traces.

* ``P = x^2`` with ``t != 1``: state ``(f_n, g_n)``, seeded by ``b_0``.
* ``P = x^3 + beta^2 x`` with ``t = -1`` and an even trace: state
  ``(f_n, g_n)``, seeded by ``a_1``.

The step maps are plain rational expressions, so they run unchanged on
``fractions.Fraction`` inputs as well as mpmath numbers.
"""

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .config import PrecisionConfig
from .errors import SingularStep, UnsupportedShape
from .moments import moment_table
from .orthopoly import RecurrenceCoeffs, recurrence_coeffs
from .params import derive_constants, group_roots
from .weight import build_weight, symmetry_report

SINGULAR_RTOL = 1e-30


@dataclass(frozen=True)
class PainleveStateX2:
    n: int
    f: object
    g: object
    t: object


@dataclass(frozen=True)
class PainleveStateX3:
    n: int
    f: object
    g: object
    beta_sq: object


def _guard(value, scale, step, what):
    if value == 0 or abs(value) <= SINGULAR_RTOL * abs(scale):
        raise SingularStep(f"step {step}: {what} is (nearly) zero", step=step)


def initial_state_x2(t, b0):
    """``f_0 = b_0 + (t+1)/(2(t-1))``, ``g_0 = 1``."""
    one = t * 0 + 1
    return PainleveStateX2(0, b0 + (t + 1) / (2 * (t - 1)), one, t)


def step_x2(state):
    """One step; returns ``(next_state, a_n, b_n)`` (``a_0`` is reported as 0)."""
    n, f, g, t = state.n, state.f, state.g, state.t
    _guard(t - 1, 1, n, "t - 1")
    _guard(g, 1, n, "g_n")
    if n == 0:
        f_next = -f
        g_next = 1 / (t * g)
        a = t * 0
    else:
        u = f * (g - 1)
        den = n * n * g - u * u
        _guard(den, abs(n * n * g) + abs(u * u), n, "n^2 g_n - f_n^2 (g_n - 1)^2")
        _guard(u - n, abs(u) + n, n, "f_n (g_n - 1) - n")
        a = t / ((t - 1) ** 2) * den / g
        f_next = f * (u - n * g) * (u - n) / den
        g_next = (u - n * g) ** 2 / (t * g * (u - n) ** 2)
    b = -f_next - (t + 1) * (2 * n + 1) / (2 * (t - 1))
    return PainleveStateX2(n + 1, f_next, g_next, t), a, b


def run_x2(t, b0, K, cfg=None):
    """``a_1..a_K`` and ``b_0..b_K`` from the ``P = x^2`` recurrence."""
    cfg = cfg or PrecisionConfig()
    with mpmath.workprec(cfg.precision_bits):
        state = initial_state_x2(t, b0)
        a, b = [], []
        for _ in range(K + 1):
            state, an, bn = step_x2(state)
            a.append(an)
            b.append(bn)
    return RecurrenceCoeffs(a=tuple(a), b=tuple(b), norms=(), K=K,
                            precision_bits=cfg.precision_bits)


def initial_state_x3(beta_sq, a1):
    """``f_1 = -beta^2 - 1/4 - a_1``, ``g_1 = 0``."""
    zero = a1 * 0
    return PainleveStateX3(1, -beta_sq - (zero + 1) / 4 - a1, zero, beta_sq)


def step_x3_even(state):
    """One step; returns ``(next_state, a_n)``."""
    n, f, g, bsq = state.n, state.f, state.g, state.beta_sq
    d1 = g * g - f
    _guard(d1, abs(g * g) + abs(f), n, "g_n^2 - f_n")
    a = -(f * 0 + n * n) / 4 + f * (f + bsq) / d1
    d2 = n * g - 2 * f
    _guard(d2, abs(n * g) + abs(2 * f), n, "n g_n - 2 f_n")
    g_next = -(f * 0 + n) / 2 - 2 * g * a / d2
    _guard(f, 1, n, "f_n")
    _guard(a, 1, n, "a_n")
    f_next = -(d2 * d2) * g_next * g_next / (4 * f * a)
    return PainleveStateX3(n + 1, f_next, g_next, bsq), a


def run_x3_even(beta_sq, a1, K, cfg=None):
    """``a_1..a_K`` (``b_k = 0``) from the even ``P = x^3 + beta^2 x`` recurrence."""
    cfg = cfg or PrecisionConfig()
    with mpmath.workprec(cfg.precision_bits):
        state = initial_state_x3(beta_sq, a1)
        a = [a1 * 0]
        for _ in range(K):
            state, an = step_x3_even(state)
            a.append(an)
    return RecurrenceCoeffs(a=tuple(a), b=tuple(a1 * 0 for _ in range(K + 1)), norms=(), K=K,
                            precision_bits=cfg.precision_bits)


def seeds_from_moments(M):
    """``(b_0, a_1)`` from the first three moments."""
    m0, m1, m2 = M[0], M[1], M[2]
    b0 = m1 / m0
    a1 = (m2 - m1 * m1 / m0) / m0
    return b0, a1


def classify_family(spec, tol=1e-12):
    """``("x2", None)``, ``("x3", beta_sq)`` or raise ``UnsupportedShape``."""
    groups = group_roots(spec.roots, tol)
    t = derive_constants(spec)[0]
    if spec.n == 2 and len(groups) == 1 and abs(groups[0][0]) <= tol:
        if abs(t - 1) <= tol:
            raise UnsupportedShape("the x^2 recurrence needs t != 1")
        return "x2", None
    if spec.n == 3:
        zeros = [r for r in spec.roots if abs(r) <= tol]
        others = [r for r in spec.roots if abs(r) > tol]
        if len(zeros) == 3:
            beta_sq = mpf(0)
        elif len(zeros) == 1 and abs(others[0] + others[1]) <= tol:
            # x^3 + beta^2 x has roots 0, +-i beta
            beta_sq = -(others[0] ** 2)
            if abs(beta_sq.imag) > tol:
                raise UnsupportedShape("beta^2 must be real")
            beta_sq = beta_sq.real
        else:
            raise UnsupportedShape("P is not of the form x^3 + beta^2 x")
        if abs(t + 1) > tol:
            raise UnsupportedShape("the x^3 recurrence needs t = -1")
        return "x3", beta_sq
    raise UnsupportedShape(f"no recurrence implemented for P of degree {spec.n} with these roots")


def _rel(u, v, scale):
    return abs(u - v) / scale if scale else abs(u - v)


def compare_recurrences(reference, other, K, compare_b=True, rtol=1e-10):
    """Relative deviations of ``a_n`` (and ``b_n``); ``b`` is scaled by ``max(|b_n|, |a_n|^(1/2))``."""
    dev_a, dev_b, first = mpf(0), mpf(0), None
    for k in range(K + 1):
        if k >= 1:
            da = _rel(other.a[k], reference.a[k], abs(reference.a[k]))
            dev_a = max(dev_a, da)
            if first is None and da > rtol:
                first = k
        if compare_b:
            scale = max(abs(reference.b[k]), mpmath.sqrt(abs(reference.a[k])) if k else 0,
                        abs(reference.b[0]))
            db = _rel(other.b[k], reference.b[k], scale)
            dev_b = max(dev_b, db)
            if first is None and db > rtol:
                first = k
    return dev_a, dev_b, first


def crosscheck(spec, G, K, cfg=None, rtol=1e-10):
    """Run the recurrence seeded from moments against the moment pipeline."""
    cfg = cfg or PrecisionConfig()
    family, beta_sq = classify_family(spec)
    with mpmath.workprec(cfg.precision_bits):
        w = build_weight(spec, G)
        if family == "x3" and not symmetry_report(w).even:
            raise UnsupportedShape("the x^3 recurrence needs an even trace")
        M = moment_table(w, 2 * K + 1, cfg)
        reference = recurrence_coeffs(M, K)
        b0, a1 = seeds_from_moments(M)
        if family == "x2":
            other = run_x2(derive_constants(spec)[0], b0, K, cfg)
            dev_a, dev_b, first = compare_recurrences(reference, other, K, True, rtol)
        else:
            other = run_x3_even(beta_sq, a1, K, cfg)
            dev_a, dev_b, first = compare_recurrences(reference, other, K, False, rtol)
    return {"family": family, "max_rel_dev_a": dev_a, "max_rel_dev_b": dev_b,
            "first_divergence": first, "moments": reference, "recurrence": other}


def dual_run_x2(t, b0, K, cfg=None):
    """Reflection check ``x -> -x``: ``(t, b_0) -> (1/t, -b_0)`` keeps ``a_n`` and negates ``b_n``."""
    cfg = cfg or PrecisionConfig()
    with mpmath.workprec(cfg.precision_bits):
        fwd = run_x2(t, b0, K, cfg)
        back = run_x2(1 / t, -b0, K, cfg)
        dev = mpf(0)
        for k in range(K + 1):
            if k:
                dev = max(dev, abs(fwd.a[k] - back.a[k]) / abs(fwd.a[k]))
            dev = max(dev, abs(fwd.b[k] + back.b[k]) / max(abs(fwd.b[k]), mpf(1)))
    return dev
