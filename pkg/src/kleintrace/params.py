"""Quantization parameters and root-level manipulations of ``P``.

A quantization is fixed by the roots of the monic polynomial ``P``, the twist
``c`` (so that ``t = exp(2 pi i c)``) and the conjugation sign ``epsilon``.
Roots are the primary representation; coefficient forms are derived.
"""

from dataclasses import dataclass, field

import mpmath
from mpmath import mp, mpc, mpf

from .config import DELTA_STRIP
from .errors import UnpairedBoundaryRoot, ValidationError
from .polynomial import Polynomial

HALF = mpf(1) / 2

# i**(-n) for n mod 4
_I_POW_NEG = (mpc(1), mpc(0, -1), mpc(-1), mpc(0, 1))


def i_pow_neg(n):
    return _I_POW_NEG[n % 4]


@dataclass(frozen=True)
class QuantizationSpec:
    roots: tuple
    c: mpf = mpf(0)
    epsilon: int = 1

    def __post_init__(self):
        roots = tuple(mpc(mp.mpmathify(r)) for r in self.roots)
        object.__setattr__(self, "roots", roots)
        c = mp.mpmathify(self.c)
        if isinstance(c, mpc):
            if c.imag != 0:
                raise ValidationError("only real c in [0, 1) is supported (|t| = 1)")
            c = c.real
        if not 0 <= c < 1:
            raise ValidationError(f"c must lie in [0, 1), got {c}")
        object.__setattr__(self, "c", c)
        if self.epsilon not in (1, -1):
            raise ValidationError("epsilon must be +1 or -1")
        if not roots:
            raise ValidationError("P must have at least one root")

    @property
    def n(self):
        return len(self.roots)

    @property
    def P(self):
        return Polynomial.from_roots(self.roots)

    @property
    def t(self):
        return derive_constants(self)[0]

    @property
    def lam(self):
        return derive_constants(self)[1]

    def with_roots(self, roots, epsilon=None):
        return QuantizationSpec(tuple(roots), self.c, self.epsilon if epsilon is None else epsilon)


@dataclass(frozen=True)
class StripClassification:
    interior: list = field(default_factory=list)
    boundary_plus: list = field(default_factory=list)
    boundary_minus: list = field(default_factory=list)
    outside: list = field(default_factory=list)


def derive_constants(spec):
    """Return ``(t, lambda, lambda_star)`` for a quantization spec."""
    c = spec.c
    t = mpmath.expjpi(2 * c)
    lam = spec.epsilon * i_pow_neg(spec.n) * mpmath.expjpi(-c)
    lam_star = (-1) ** spec.n / lam
    return mpc(t), mpc(lam), mpc(lam_star)


def _close(a, b, tol=DELTA_STRIP):
    return abs(a - b) <= tol


def _match_multisets(left, right, tol=DELTA_STRIP):
    pool = list(right)
    for a in left:
        for k, b in enumerate(pool):
            if _close(a, b, tol):
                del pool[k]
                break
        else:
            return False
    return not pool


def check_reality(spec, tol=DELTA_STRIP):
    """True iff the roots are invariant under ``alpha -> -conj(alpha)``.

    This is the condition ``conj(P)(-x) = (-1)^n P(x)`` for a conjugation.
    """
    mirrored = [-mpmath.conj(r) for r in spec.roots]
    return _match_multisets(spec.roots, mirrored, tol)


def _strip_side(root, tol=DELTA_STRIP):
    """-2 outside left, -1 on Re=-1/2, 0 interior, 1 on Re=1/2, 2 outside right."""
    gap = abs(root.real) - HALF
    if abs(gap) <= tol:
        return 1 if root.real > 0 else -1
    if gap < 0:
        return 0
    return 2 if root.real > 0 else -2


def classify_strip(spec, tol=DELTA_STRIP):
    out = StripClassification()
    groups = {0: out.interior, 1: out.boundary_plus, -1: out.boundary_minus,
              2: out.outside, -2: out.outside}
    for root in spec.roots:
        groups[_strip_side(root, tol)].append(root)
    return out


def _snap_to_boundary(root, sign):
    return mpc(sign * HALF, root.imag)


def shifted_roots(roots, tol=DELTA_STRIP):
    """Move each root by the minimal integer into ``|Re x| <= 1/2``."""
    out = []
    for root in roots:
        re = root.real
        if re > HALF + tol:
            r = int(mpmath.ceil(re - HALF - tol))
            moved = root - r
        elif re < -HALF - tol:
            r = int(mpmath.ceil(-HALF - re - tol))
            moved = root + r
        else:
            moved = root
        side = _strip_side(moved, tol)
        if side in (1, -1):
            moved = _snap_to_boundary(moved, side)
        out.append(moved)
    return out


def circ_roots(roots, tol=DELTA_STRIP):
    """Roots already inside the closed strip (the rest are thrown out)."""
    return [r for r in roots if abs(_strip_side(r, tol)) <= 1]


def shift_to_strip(spec, tol=DELTA_STRIP):
    """Return ``(P_tilde, P_circ)``."""
    return (Polynomial.from_roots(shifted_roots(spec.roots, tol)),
            Polynomial.from_roots(circ_roots(spec.roots, tol)))


def reduce_to_strip(spec, tol=DELTA_STRIP):
    """Spec for ``P_circ`` with the conjugation ``lambda_circ = (-1)^((n-n_circ)/2) lambda``.

    The sign ``epsilon_circ`` is read back off ``lambda_circ`` relative to
    ``i^(-n_circ) exp(-pi i c)``.
    """
    kept = circ_roots(spec.roots, tol)
    dropped = spec.n - len(kept)
    if dropped % 2:
        raise ValidationError("roots outside the strip do not pair up; reality condition fails")
    if not kept:
        raise ValidationError("no roots of P lie in the closed strip")
    lam = derive_constants(spec)[1]
    lam_circ = (-1) ** (dropped // 2) * lam
    ratio = lam_circ / (i_pow_neg(len(kept)) * mpmath.expjpi(-spec.c))
    eps_circ = 1 if ratio.real > 0 else -1
    return spec.with_roots(kept, epsilon=eps_circ)


def closed_strip_roots(roots, tol=DELTA_STRIP):
    """Split roots in the closed strip into ``(P_star roots, Q roots)``.

    Roots at ``Re = 1/2`` pair with roots at ``Re = -1/2`` of equal imaginary
    part; each pair contributes the root ``i*Im`` to ``Q``.
    """
    pstar, plus, minus = [], [], []
    for root in roots:
        side = _strip_side(root, tol)
        if side == 0:
            pstar.append(root)
        elif side == 1:
            plus.append(root)
        elif side == -1:
            minus.append(root)
        else:
            raise ValidationError(f"root {root} lies outside the closed strip |Re x| <= 1/2")
    q_roots = []
    for root in plus:
        for k, other in enumerate(minus):
            if abs(root.imag - other.imag) <= tol:
                del minus[k]
                break
        else:
            raise UnpairedBoundaryRoot(f"boundary root {root} has no partner at Re = -1/2")
        q_roots.append(mpc(0, root.imag))
    if minus:
        raise UnpairedBoundaryRoot(f"boundary root {minus[0]} has no partner at Re = +1/2")
    return pstar, q_roots


def factor_closed_strip(spec, tol=DELTA_STRIP):
    """Return monic ``(P_star, Q)`` with ``P(x) = P_star(x) Q(x+1/2) Q(x-1/2)``."""
    pstar, q_roots = closed_strip_roots(spec.roots, tol)
    return Polynomial.from_roots(pstar), Polynomial.from_roots(q_roots)


def group_roots(roots, tol=DELTA_STRIP):
    """Merge roots closer than ``tol``; returns ``[(root, multiplicity)]``."""
    groups = []
    for root in roots:
        for k, (rep, mult) in enumerate(groups):
            if _close(root, rep, tol):
                groups[k] = (rep, mult + 1)
                break
        else:
            groups.append((root, 1))
    return groups


def exponentiate_roots(roots):
    """``bold P(X) = prod (X + exp(2 pi i alpha_j))``."""
    return Polynomial.from_roots([-mpmath.expjpi(2 * r) for r in roots])


def exponentiate(spec):
    return exponentiate_roots(spec.roots)
