"""Trace values ``T(R(z))`` as moments of the weight on the imaginary axis.

Conventions: ``x = iy`` and ``|dx| = dy``, so

    M_r = integral of (iy)^r w(iy) dy + sum of mass_j * x_j^r.

Results are cached per (density, precision, target) so that several callers
asking for moments of the same weight share one adaptive rule.
"""

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpc, mpf

from .config import PrecisionConfig
from .errors import ValidationError
from .params import derive_constants
from .polynomial import Polynomial
from .quadrature import integrate_powers
from .weight import decay_rates, shifted_density, weight_at

_I_POW = (mpc(1), mpc(0, 1), mpc(-1), mpc(0, -1))
_CACHE = {}
_CACHE_LIMIT = 64


@dataclass(frozen=True)
class MomentTable:
    values: tuple
    precision_bits: int
    error_estimates: tuple

    def __len__(self):
        return len(self.values)

    def __getitem__(self, r):
        return self.values[r]

    def y_moments(self):
        """Moments ``m_r = M_r / i^r`` of the measure in the real variable ``y``."""
        return [v / _I_POW[r % 4] for r, v in enumerate(self.values)]


@dataclass(frozen=True)
class Density:
    """A density ``f(y)`` on the real line plus point masses at ``x_j = i y_j``."""

    fn: object
    rate_plus: mpf
    rate_minus: mpf
    atoms: tuple = ()
    key: tuple | None = None


def base_density(w):
    rates = decay_rates(w)
    return Density(fn=lambda y: weight_at(w, mpc(0, y)), rate_plus=rates.rate_plus,
                   rate_minus=rates.rate_minus, atoms=w.atoms, key=("base",) + w.key())


def shifted_measure(spec, w):
    """Density ``y -> lam P(iy) w(iy + 1/2)``; atoms drop out since ``P`` vanishes there."""
    lam = derive_constants(spec)[1]
    rates = decay_rates(w)
    return Density(fn=lambda y: shifted_density(w, lam, y), rate_plus=rates.rate_plus,
                   rate_minus=rates.rate_minus, atoms=(), key=("shifted", lam) + w.key())


@dataclass
class _Zero:
    values: list
    errors: list


def _as_density(obj):
    return obj if isinstance(obj, Density) else base_density(obj)


def _integrals(dens, r_max, cfg):
    key = None
    if dens.key is not None:
        key = (dens.key, cfg.precision_bits, cfg.target, cfg.order)
        hit = _CACHE.get(key)
        if hit is not None and len(hit.values) > r_max:
            return hit
    if dens.rate_plus == mpmath.inf and dens.rate_minus == mpmath.inf:
        zeros = [mpc(0)] * (r_max + 1)
        res = _Zero(zeros, [mpf(0)] * (r_max + 1))
    else:
        res = integrate_powers(dens.fn, r_max, dens.rate_plus, dens.rate_minus,
                               cfg.target, cfg.order, cfg.max_panels)
    if key is not None:
        if len(_CACHE) >= _CACHE_LIMIT:
            _CACHE.pop(next(iter(_CACHE)))
        _CACHE[key] = res
    return res


def clear_cache():
    _CACHE.clear()


def moment_table(weight_or_density, r_max, cfg=None):
    """``M_0 .. M_{r_max}`` with absolute error estimates."""
    cfg = cfg or PrecisionConfig()
    if r_max < 0:
        raise ValidationError("r_max must be nonnegative")
    dens = _as_density(weight_or_density)
    with mpmath.workprec(cfg.precision_bits):
        res = _integrals(dens, r_max, cfg)
        values, errors = [], []
        for r in range(r_max + 1):
            v = _I_POW[r % 4] * res.values[r]
            for loc, mass in dens.atoms:
                v += mass * loc ** r
            values.append(+v)
            errors.append(+res.errors[r])
    return MomentTable(tuple(values), cfg.precision_bits, tuple(errors))


def moment(w, r, cfg=None):
    return moment_table(w, r, cfg).values[r]


def trace_of_polynomial(w, R, cfg=None):
    """``T(R(z))`` for a polynomial ``R`` (linear in ``R``)."""
    if not isinstance(R, Polynomial):
        R = Polynomial(R)
    if R.is_zero():
        return mpc(0)
    table = moment_table(w, R.degree, cfg)
    with mpmath.workprec(table.precision_bits):
        return mpmath.fsum(c * m for c, m in zip(R.coeffs, table.values))


def axiom_polynomials(spec, S):
    """``(S(x-1/2)P(x-1/2), S(x+1/2)P(x+1/2))``."""
    half = mpf(1) / 2
    prod = S * spec.P
    return prod.shift(-half), prod.shift(half)


def verify_trace_axiom(spec, w, S, cfg=None):
    """``|T(S(z-1/2)P(z-1/2)) - t T(S(z+1/2)P(z+1/2))|``."""
    cfg = cfg or PrecisionConfig()
    if not isinstance(S, Polynomial):
        S = Polynomial(S)
    if S.degree > cfg.max_test_degree:
        raise ValidationError(f"deg S = {S.degree} exceeds max_test_degree = {cfg.max_test_degree}")
    if S.is_zero():
        return mpf(0)
    with mpmath.workprec(cfg.precision_bits):
        t = derive_constants(spec)[0]
        minus, plus = axiom_polynomials(spec, S)
        lhs = trace_of_polynomial(w, minus, cfg)
        rhs = trace_of_polynomial(w, plus, cfg)
        return abs(lhs - t * rhs)


def shifted_measure_moments(spec, w, r_max, cfg=None):
    """Moments of ``lam P(x) w(x + 1/2)`` on the imaginary axis."""
    return moment_table(shifted_measure(spec, w), r_max, cfg)
