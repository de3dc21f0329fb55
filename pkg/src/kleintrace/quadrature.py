"""Adaptive composite Gauss-Legendre quadrature for power moments.

The integrands here are ``y**r f(y)`` for ``r = 0..R`` with one analytic,
exponentially decaying ``f``.  All powers share nodes, so a panel is accepted
only when every power has converged.
"""

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .errors import PrecisionUnreachable

_GL_CACHE = {}

PANEL_WIDTH = mpf(1) / 2
SCAN_STEP = mpf(1) / 2
MAX_TRUNCATION = 10000


def gauss_legendre(order, prec=None):
    """Nodes and weights of the ``order``-point rule on ``[-1, 1]``."""
    prec = mp.prec if prec is None else prec
    key = (order, prec)
    if key in _GL_CACHE:
        return _GL_CACHE[key]
    with mpmath.workprec(prec + 20):
        nodes, weights = [], []
        eps = mpf(2) ** (-prec - 10)
        for k in range(1, (order + 1) // 2 + 1):
            x = mpmath.cos(mpmath.pi * (k - mpf(1) / 4) / (order + mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for j in range(2, order + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = order * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < eps:
                    break
            wgt = 2 / ((1 - x * x) * dp * dp)
            nodes.append(x)
            weights.append(wgt)
        full_nodes, full_weights = [], []
        for k, (x, wgt) in enumerate(zip(nodes, weights)):
            if order % 2 and k == len(nodes) - 1:
                full_nodes.append(mpf(0))
                full_weights.append(wgt)
            else:
                full_nodes.extend([x, -x])
                full_weights.extend([wgt, wgt])
    rule = ([+x for x in full_nodes], [+w for w in full_weights])
    _GL_CACHE[key] = rule
    return rule


@dataclass
class PowerIntegrals:
    """``values[r]`` approximates the integral of ``y**r f(y) dy``."""

    values: list
    errors: list
    abs_integrals: list
    nodes: list
    weights: list
    truncation: tuple
    panels: int


def _fixed(x, bits):
    return int(mpmath.ldexp(x, bits))


def _panel(f, a, b, r_max, rule, with_abs=False):
    """GL sums of ``y**r f(y)`` on ``[a, b]``.

    The power loop runs in fixed point on Python integers scaled by
    ``2**bits``, with enough guard bits that the rounding stays below the
    working precision after multiplying by ``y**r_max``; integer arithmetic
    is far cheaper than mpf arithmetic.
    """
    xs, ws = rule
    half = (b - a) / 2
    mid = (a + b) / 2
    # rounding at 2**-bits gets amplified by |y|**r along the power loop
    reach = max(abs(a), abs(b), 2)
    bits = mp.prec + 32 + r_max * int(mpmath.ceil(mpmath.log(reach, 2)))
    re_sums = [0] * (r_max + 1)
    im_sums = [0] * (r_max + 1)
    abs_sums = [0] * (r_max + 1)
    pts = []
    for x, wt in zip(xs, ws):
        y = mid + half * x
        v = mpmath.mpc(f(y)) * (wt * half)
        pts.append((y, v))
        yi = _fixed(y, bits)
        p = _fixed(v.real, bits)
        for r in range(r_max + 1):
            re_sums[r] += p
            p = (p * yi) >> bits
        if v.imag != 0:
            p = _fixed(v.imag, bits)
            for r in range(r_max + 1):
                im_sums[r] += p
                p = (p * yi) >> bits
        if with_abs:
            ap, ay = _fixed(abs(v), bits), abs(yi)
            for r in range(r_max + 1):
                abs_sums[r] += ap
                ap = (ap * ay) >> bits
    sums = [mpmath.mpc(mpmath.ldexp(re, -bits), mpmath.ldexp(im, -bits))
            for re, im in zip(re_sums, im_sums)]
    abs_out = [mpmath.ldexp(v, -bits) for v in abs_sums]
    return sums, abs_out, pts


def _truncation(f, rate, sign, r_max, target):
    """Scan outward until the sampled decay bound makes the tail negligible."""
    y = mpf(0)
    crude = [mpf(0)] * (r_max + 1)
    start = max(mpf(2), 2 * (r_max + 1) / rate)
    ok_prev = False
    while y < MAX_TRUNCATION:
        y += SCAN_STEP
        a = abs(f(sign * y))
        for r in range(r_max + 1):
            crude[r] += a * y ** r * SCAN_STEP
        if y < start:
            continue
        tails = [2 * a * y ** r / rate for r in range(r_max + 1)]
        ok = all(tails[r] <= target / 10 * max(1, crude[r]) for r in range(r_max + 1))
        if ok and ok_prev:
            return y, tails
        ok_prev = ok
    raise PrecisionUnreachable("integrand does not decay fast enough to truncate")


def integrate_powers(f, r_max, rate_plus, rate_minus, target, order, max_panels):
    """Integrate ``y**r f(y)`` over the real line for ``r <= r_max``.

    ``f`` must be analytic near the real axis and decay like
    ``exp(-rate_plus*y)`` / ``exp(rate_minus*y)``.
    """
    y_plus, tail_plus = _truncation(f, rate_plus, 1, r_max, target)
    y_minus, tail_minus = _truncation(f, rate_minus, -1, r_max, target)
    rule = gauss_legendre(order)
    count = int(mpmath.ceil((y_plus + y_minus) / PANEL_WIDTH))
    edges = [-y_minus + (y_plus + y_minus) * k / count for k in range(count + 1)]
    pending = []
    abs_tot = [mpf(0)] * (r_max + 1)
    for a, b in zip(edges[:-1], edges[1:]):
        sums, abs_sums, _ = _panel(f, a, b, r_max, rule, with_abs=True)
        pending.append((a, b, sums))
        abs_tot = [s + t for s, t in zip(abs_tot, abs_sums)]
    tol = [target * max(1, s) for s in abs_tot]
    values = [mpmath.mpc(0)] * (r_max + 1)
    errors = [tail_plus[r] + tail_minus[r] for r in range(r_max + 1)]
    nodes, weights = [], []
    accepted = 0
    while pending:
        total = accepted + len(pending)
        if total > max_panels:
            raise PrecisionUnreachable(
                f"adaptive quadrature needs more than {max_panels} panels")
        scale = 1 / mpmath.sqrt(total)
        nxt = []
        for a, b, whole in pending:
            m = (a + b) / 2
            left, _, lpts = _panel(f, a, m, r_max, rule)
            right, _, rpts = _panel(f, m, b, r_max, rule)
            diffs = [abs(left[r] + right[r] - whole[r]) for r in range(r_max + 1)]
            if all(d <= t * scale for d, t in zip(diffs, tol)):
                accepted += 2
                for r in range(r_max + 1):
                    values[r] += left[r] + right[r]
                    errors[r] += diffs[r]
                for y, v in lpts + rpts:
                    nodes.append(y)
                    weights.append(v)
            else:
                nxt.append((a, m, left))
                nxt.append((m, b, right))
        pending = nxt
    return PowerIntegrals(values=values, errors=errors, abs_integrals=abs_tot,
                          nodes=nodes, weights=weights,
                          truncation=(-y_minus, y_plus), panels=accepted)


def power_sums(nodes, weights, r_max):
    """Reuse a stored rule for higher powers (no new error estimate)."""
    sums = [mpmath.mpc(0)] * (r_max + 1)
    for y, v in zip(nodes, weights):
        p = v
        for r in range(r_max + 1):
            sums[r] += p
            p *= y
    return sums

