"""Closed forms for the unique positive even traces at ``n = 3`` and ``n = 4``.

The values refer to the weights ``1 / prod_j cos(pi (x - alpha_j))`` on the
imaginary axis, i.e. ``build_weight`` with numerator ``8X`` (``n = 3``) or
``16X^2`` (``n = 4``); see :data:`UNIT_COSINE_NUMERATOR`.  Ratios such as
``alpha = -T(z^2)/T(1)`` do not depend on that scale.

Everything is written through functions that are entire (or at least
regular on ``s > -1/4``) in the squared parameters ``s = beta^2`` and
``t = gamma^2``, so the removable singularities at ``beta = 0``,
``beta = +-gamma`` disappear:

* ``n = 3``: ``T(1) = D/(S^2 C)``, ``T(z^2) = (1 - D/4)/(S^2 C)``,
  ``alpha = 1/4 - 1/D`` with ``C = cosh(pi sqrt s)``,
  ``S = sinh(pi sqrt s)/sqrt s`` and ``D = (C - 1)/s``.
* ``n = 4``: with ``h = 4 sqrt s / sinh(2 pi sqrt s)``,
  ``k = cosh(2 pi sqrt s)`` and ``m = (1 + 4s) h / 12``, and ``f[s, t]``
  the divided difference, ``T(1) = -2 h[s,t]/k[s,t]``,
  ``T(z^2) = 2 m[s,t]/k[s,t]`` and ``alpha = m[s,t]/h[s,t]``.
"""

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .errors import ValidationError

UNIT_COSINE_NUMERATOR = {3: (0, 8), 4: (0, 0, 16)}

# below this |s| the power series replaces the closed forms
SERIES_RADIUS = mpf(1) / 16
# relative gap |s - t| below which divided differences switch to Taylor form
COINCIDENCE_RTOL = mpf("1e-8")


@dataclass(frozen=True)
class ExactTraceValues:
    T1: mpf
    Tz2: mpf
    alpha: mpf

    @property
    def tau(self):
        return 128 * self.alpha


def _real(v):
    v = mp.mpmathify(v)
    if isinstance(v, mpmath.mpc):
        if abs(v.imag) > mpf(2) ** (-mp.prec // 2) * max(1, abs(v.real)):
            raise ValidationError(f"value {v} should be real")
        v = v.real
    return v


def _square(b):
    """``b^2`` for real ``b`` or purely imaginary ``b`` (then negative)."""
    b = mp.mpmathify(b)
    return _real(b * b)


def _series(coeff, s, tol):
    acc, k = mpf(0), 0
    while True:
        term = coeff(k) * s ** k
        acc += term
        if k > 2 and abs(term) <= tol * abs(acc):
            return acc
        k += 1


def _check_strip(s):
    if s <= mpf(-1) / 4:
        raise ValidationError(f"beta^2 = {mpmath.nstr(s, 10)} must exceed -1/4")


# n = 3 building blocks; u = pi^2 s


def _cosh_sqrt(s, scale):
    """``cosh(scale * pi * sqrt s)``."""
    if abs(s) < SERIES_RADIUS:
        u = (scale * mpmath.pi) ** 2
        return _series(lambda k: u ** k / mpmath.factorial(2 * k), s, mp.eps)
    return _real(mpmath.cosh(scale * mpmath.pi * mpmath.sqrt(s)))


def _sinhc_sqrt(s):
    """``sinh(pi sqrt s) / sqrt s`` (equals ``pi`` at ``s = 0``)."""
    if abs(s) < SERIES_RADIUS:
        u = mpmath.pi ** 2
        return mpmath.pi * _series(lambda k: u ** k / mpmath.factorial(2 * k + 1), s, mp.eps)
    r = mpmath.sqrt(s)
    return _real(mpmath.sinh(mpmath.pi * r) / r)


def _cosh_m1_over(s):
    """``(cosh(pi sqrt s) - 1) / s`` (equals ``pi^2/2`` at ``s = 0``)."""
    if abs(s) < SERIES_RADIUS:
        u = mpmath.pi ** 2
        return _series(lambda k: u ** (k + 1) / mpmath.factorial(2 * k + 2), s, mp.eps)
    return (_cosh_sqrt(s, 1) - 1) / s


def _n3_from_square(s):
    _check_strip(s)
    C = _cosh_sqrt(s, 1)
    S = _sinhc_sqrt(s)
    D = _cosh_m1_over(s)
    den = S * S * C
    return ExactTraceValues(T1=D / den, Tz2=(1 - D / 4) / den, alpha=mpf(1) / 4 - 1 / D)


def trace_values_n3(beta):
    """``T(1)``, ``T(z^2)`` and ``alpha`` for ``P = x^3 + beta^2 x`` (``beta^2 > -1/4``)."""
    return _n3_from_square(_square(beta))


def alpha_n3(kappa):
    """``alpha(kappa)`` with ``kappa = -beta^2 - 1/4``; defined for ``kappa <= 0``.

    ``kappa = 0`` is the boundary limit (value 0); ``kappa > 0`` puts the
    roots of ``P`` outside the open strip and is rejected.
    """
    kappa = _real(kappa)
    if kappa > 0:
        raise ValidationError(f"kappa = {mpmath.nstr(kappa, 10)} must be <= 0")
    if kappa == 0:
        return mpf(0)
    return _n3_from_square(-kappa - mpf(1) / 4).alpha


def alpha_n3_display(kappa):
    """Literal ``1/4 - (kappa + 1/4)/(1 - cos(pi sqrt(kappa + 1/4)))`` (not at ``kappa = -1/4``)."""
    kappa = mp.mpmathify(kappa)
    q = kappa + mpf(1) / 4
    return _real(mpf(1) / 4 - q / (1 - mpmath.cos(mpmath.pi * mpmath.sqrt(q))))


# n = 4 building blocks


def _xsinh_coeff(k):
    # x / sinh(x) = sum c_k x^(2k)
    return -(2 ** (2 * k) - 2) * mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k)


def _h(s):
    """``4 sqrt s / sinh(2 pi sqrt s)``."""
    if abs(s) < SERIES_RADIUS:
        u = 4 * mpmath.pi ** 2
        return 2 / mpmath.pi * _series(lambda k: _xsinh_coeff(k) * u ** k, s, mp.eps)
    r = mpmath.sqrt(s)
    return _real(4 * r / mpmath.sinh(2 * mpmath.pi * r))


def _k(s):
    return _cosh_sqrt(s, 2)


def _m(s):
    return (1 + 4 * s) * _h(s) / 12


def divided_difference(f, s, t):
    """``(f(s) - f(t)) / (s - t)``, by a symmetric Taylor expansion when ``s ~ t``.

    Near coincidence ``f[s,t] = f'(mu) + f'''(mu) d^2/24 + f^(5)(mu) d^4/1920``
    with ``mu = (s+t)/2`` and ``d = s - t``; the omitted term is ``O(d^6)``.
    """
    d = s - t
    scale = max(mpf(1), abs(s), abs(t))
    if abs(d) > COINCIDENCE_RTOL * scale:
        return (f(s) - f(t)) / d
    mu = (s + t) / 2
    d1, d3, d5 = (mpmath.diff(f, mu, k) for k in (1, 3, 5))
    return d1 + d3 * d * d / 24 + d5 * d ** 4 / 1920


def _n4_from_squares(s, t):
    _check_strip(s)
    _check_strip(t)
    hd = divided_difference(_h, s, t)
    kd = divided_difference(_k, s, t)
    md = divided_difference(_m, s, t)
    return ExactTraceValues(T1=-2 * hd / kd, Tz2=2 * md / kd, alpha=md / hd)


def trace_values_n4(beta, gamma):
    """``T(1)``, ``T(z^2)`` and ``alpha`` for ``P = (x^2 + beta^2)(x^2 + gamma^2)``."""
    return _n4_from_squares(_square(beta), _square(gamma))


def alpha_n4(beta, gamma):
    return trace_values_n4(beta, gamma).alpha


def tau_n4(beta, gamma):
    """``tau = 128 alpha``."""
    return 128 * alpha_n4(beta, gamma)


def alpha_n4_display(beta, gamma):
    """``1/12 + (beta^3 sinh 2 pi gamma - gamma^3 sinh 2 pi beta) / (3 (beta sinh 2 pi gamma - gamma sinh 2 pi beta))``.

    Only valid off the degenerate loci.
    """
    b, g = mp.mpmathify(beta), mp.mpmathify(gamma)
    sb, sg = mpmath.sinh(2 * mpmath.pi * b), mpmath.sinh(2 * mpmath.pi * g)
    return _real(mpf(1) / 12 + (b ** 3 * sg - g ** 3 * sb) / (3 * (b * sg - g * sb)))
