"""Weight functions on the imaginary axis.

A trace is represented by the density

    w(x) = exp(2 pi i c x) G(X) / bigP(X),   X = exp(2 pi i x),

integrated over ``x = iy`` against ``dy``, plus optional point masses at the
imaginary-axis roots of ``Q`` (closed-strip case).  ``bigP`` is built from the
roots of ``P`` in the open strip ``|Re x| < 1/2``.
"""

from dataclasses import dataclass, field

import mpmath
from mpmath import mp, mpc, mpf

from .config import DELTA_POLE, DELTA_STRIP
from .errors import (
    AtomNotAtBoundaryRoot,
    AtomOffAxis,
    DegreeTooHigh,
    EvaluationAtPole,
    MissingVanishingAtZero,
    NonIntegrable,
    ValidationError,
)
from .params import circ_roots, closed_strip_roots, exponentiate_roots
from .polynomial import Polynomial


@dataclass(frozen=True)
class DecayRates:
    rate_plus: mpf
    rate_minus: mpf

    @property
    def slowest(self):
        return min(self.rate_plus, self.rate_minus)


@dataclass(frozen=True)
class SymmetryFlags:
    quasi_periodic: bool
    even: bool
    real_on_axis: bool


@dataclass(frozen=True)
class WeightSpec:
    """Density data.  ``roots`` are the open-strip roots used for ``bigP``.

    ``roots`` may be ``None`` for a weight given directly by ``bigP``; the
    shifted (second positivity) measure needs them.
    """

    c: mpf
    G: Polynomial
    bigP: Polynomial
    atoms: tuple = ()
    roots: tuple | None = None
    q_roots: tuple = ()
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def n_star(self):
        return self.bigP.degree

    def key(self):
        """Hashable identity used by the moment cache."""
        return (self.c, self.G.coeffs, self.bigP.coeffs, self.atoms,
                self.roots, self.q_roots)

    def _exp_roots(self):
        # exp(2 pi i alpha) for the current working precision
        prec = mp.prec
        cached = self._cache.get(("exp", prec))
        if cached is None:
            if self.roots is None:
                cached = None
            else:
                cached = [mpmath.expjpi(2 * mpc(a)) for a in self.roots]
            self._cache[("exp", prec)] = cached
        return cached


def _as_atom(atom):
    if isinstance(atom, dict):
        loc, mass = mpc(0, mp.mpmathify(atom["y"])), atom["mass"]
    else:
        loc, mass = atom
        loc = mpc(mp.mpmathify(loc))
    mass = mp.mpmathify(mass)
    if isinstance(mass, mpc):
        if mass.imag != 0:
            raise ValidationError("atom masses must be real")
        mass = mass.real
    if abs(loc.real) > DELTA_STRIP:
        raise AtomOffAxis(f"atom at {loc} is not on the imaginary axis")
    return mpc(0, loc.imag), mass


def decay_rates(w):
    """Exponential decay rates of ``|w(iy)|`` as ``y -> +inf`` and ``-inf``."""
    if w.G.is_zero():
        return DecayRates(mpmath.inf, mpmath.inf)
    plus = 2 * mpmath.pi * (w.c + w.G.order_at_zero())
    minus = 2 * mpmath.pi * (w.n_star - w.G.degree - w.c)
    return DecayRates(plus, minus)


def build_weight(spec, G, atoms=()):
    """Weight for the quantization ``spec`` with numerator ``G``.

    Roots outside the closed strip are discarded (the trace then lives on
    ``P_circ``); boundary roots pair into ``Q`` and only carry atoms.
    """
    G = Polynomial([mp.mpmathify(a) for a in G.coeffs]) if isinstance(G, Polynomial) \
        else Polynomial([mp.mpmathify(a) for a in G])
    if G.degree > spec.n - 1:
        raise DegreeTooHigh(f"deg G = {G.degree} exceeds n - 1 = {spec.n - 1}")
    if spec.c == 0 and not G.is_zero() and G.coeff(0) != 0:
        raise MissingVanishingAtZero("c = 0 requires G(0) = 0")
    pstar, q_roots = closed_strip_roots(circ_roots(spec.roots))
    parsed = []
    for atom in atoms:
        loc, mass = _as_atom(atom)
        if not any(abs(loc - q) <= DELTA_STRIP for q in q_roots):
            raise AtomNotAtBoundaryRoot(f"atom at {loc} is not at a root of Q")
        if any(abs(loc - p[0]) <= DELTA_STRIP for p in parsed):
            raise ValidationError(f"duplicate atom at {loc}")
        parsed.append((loc, mass))
    w = WeightSpec(c=spec.c, G=G, bigP=exponentiate_roots(pstar), atoms=tuple(parsed),
                   roots=tuple(pstar), q_roots=tuple(q_roots))
    rates = decay_rates(w)
    if rates.rate_plus <= 0 or rates.rate_minus <= 0:
        raise NonIntegrable(
            f"decay rates ({mpmath.nstr(rates.rate_plus, 6)}, {mpmath.nstr(rates.rate_minus, 6)})"
            " must both be positive")
    return w


def weight_at(w, x):
    """Density at a complex point ``x`` (no pole guard)."""
    if w.G.is_zero():
        return mpc(0)
    x = mpc(x)
    X = mpmath.expjpi(2 * x)
    exps = w._exp_roots()
    if abs(X) <= 1:
        num = w.G(X)
        if exps is None:
            den = w.bigP(X)
        else:
            den = mpc(1)
            for e in exps:
                den *= X + e
        return mpmath.expjpi(2 * w.c * x) * num / den
    # divide through by X**n_star to keep intermediate magnitudes moderate
    Z = 1 / X
    num = w.G.reversed()(Z)
    if exps is None:
        den = w.bigP.reversed()(Z)
    else:
        den = mpc(1)
        for e in exps:
            den *= 1 + e * Z
    shift = w.c + w.G.degree - w.n_star
    return mpmath.expjpi(2 * shift * x) * num / den


def eval_weight(w, y):
    """``w(iy)`` for real ``y``."""
    y = mp.mpmathify(y)
    for pole in axis_poles(w):
        if abs(y - pole.imag) < DELTA_POLE:
            raise EvaluationAtPole(f"y = {y} is within {DELTA_POLE} of an axis pole")
    return weight_at(w, mpc(0, y))


def shifted_density(w, lam, y):
    """``lam * P(x) * w(x + 1/2)`` at ``x = iy``.

    ``P`` is the closed-strip polynomial ``P_star(x) Q(x+1/2) Q(x-1/2)``.  Each
    open-strip root contributes ``(x-a) / (X' + e^{2 pi i a})`` with
    ``X' = -exp(2 pi i x)``, rewritten through ``expm1`` so that the removable
    singularity at ``x = a`` (imaginary ``a``) evaluates cleanly.
    """
    if w.roots is None:
        raise ValidationError("shifted measure needs the open-strip roots of the weight")
    x = mpc(0, mp.mpmathify(y))
    if w.G.is_zero():
        return mpc(0)
    half = mpf(1) / 2
    Xs = -mpmath.expjpi(2 * x)
    val = lam * mpmath.expjpi(2 * w.c * (x + half)) * w.G(Xs)
    for a, e in zip(w.roots, w._exp_roots()):
        d = x - a
        arg = 2j * mpmath.pi * d
        if abs(arg) < mpf(2) ** (-mp.prec // 2):
            ratio = 1 / (2j * mpmath.pi) * (1 - arg / 2)
        else:
            ratio = d / mpmath.expm1(arg)
        val *= -ratio / e
    for q in w.q_roots:
        val *= (x + half - q) * (x - half - q)
    return val


def axis_poles(w, tol=DELTA_STRIP):
    """Poles ``iy`` of the density on the imaginary axis."""
    prec = mp.prec
    cached = w._cache.get(("poles", prec))
    if cached is not None:
        return cached
    if w.roots is not None:
        xroots = [-e for e in w._exp_roots()]
    elif w.bigP.degree > 0:
        xroots = mpmath.polyroots(list(reversed(w.bigP.coeffs)), maxsteps=200, extraprec=2 * prec)
    else:
        xroots = []
    poles = []
    for X in xroots:
        X = mpc(X)
        if X.real > 0 and abs(X.imag) <= tol * abs(X):
            y = -mpmath.log(X.real) / (2 * mpmath.pi)
            if all(abs(y - p.imag) > tol for p in poles):
                poles.append(mpc(0, y))
    w._cache[("poles", prec)] = poles
    return poles


def symmetry_report(w, samples=64, rtol=1e-20):
    """Sampled structural flags of the weight on the imaginary axis."""
    ys = [mpf(k) / 16 + mpf(1) / 37 for k in range(samples)]
    t = mpmath.expjpi(2 * w.c)
    plus = [weight_at(w, mpc(0, y)) for y in ys]
    minus = [weight_at(w, mpc(0, -y)) for y in ys]
    scale = max([abs(v) for v in plus + minus] + [mpf(0)])
    tol = rtol * scale if scale else mpf(rtol)
    even = all(abs(a - b) <= tol for a, b in zip(plus, minus))
    atom_set = {(mpmath.nstr(a.imag, 12), mpmath.nstr(m, 12)) for a, m in w.atoms}
    mirrored = {(mpmath.nstr(-a.imag, 12), mpmath.nstr(m, 12)) for a, m in w.atoms}
    even = even and atom_set == mirrored
    real = all(abs(v.imag) <= tol for v in plus + minus)
    quasi = all(
        abs(weight_at(w, mpc(1, y)) - t * weight_at(w, mpc(0, y))) <= tol
        for y in ys[::8])
    return SymmetryFlags(quasi_periodic=quasi, even=even, real_on_axis=real)
