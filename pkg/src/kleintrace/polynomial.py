"""Dense univariate polynomials with mpmath (or exact) coefficients.

Coefficients are stored in ascending order.  Arithmetic only uses ``+ - *``
and division by scalars, so ``fractions.Fraction`` coefficients work as well
as ``mpf``/``mpc``.
"""

from math import comb

import mpmath
from mpmath import mp


class Polynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_roots(cls, roots):
        poly = cls([1])
        for root in roots:
            poly = poly * cls([-root, 1])
        return poly

    @classmethod
    def monomial(cls, k, coeff=1):
        return cls([0] * k + [coeff])

    @property
    def degree(self):
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return self.coeffs == other.coeffs

    __hash__ = None

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self.coeff(k) + other.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Polynomial([c / scalar for c in self.coeffs])

    def __pow__(self, k):
        out = Polynomial([1])
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, divisor):
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = divisor.degree
        lead = divisor.leading
        quot = [0] * max(0, len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            q = rem[k] / lead
            quot[k - dd] = q
            for j, c in enumerate(divisor.coeffs):
                rem[k - dd + j] -= q * c
        return Polynomial(quot), Polynomial(rem[:dd])

    def shift(self, a):
        """Return ``x -> self(x + a)``."""
        n = len(self.coeffs)
        out = [0] * n
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            apow = 1
            for k in range(j, -1, -1):
                out[k] += c * comb(j, k) * apow
                apow *= a
        return Polynomial(out)

    def reflect(self):
        """Return ``x -> self(-x)``."""
        return Polynomial([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)])

    def conj(self):
        return Polynomial([mpmath.conj(c) for c in self.coeffs])

    def derivative(self):
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def reversed(self, degree=None):
        """Coefficients of ``X**degree * self(1/X)``."""
        degree = self.degree if degree is None else degree
        coeffs = list(self.coeffs) + [0] * (degree + 1 - len(self.coeffs))
        return Polynomial(coeffs[::-1])

    def order_at_zero(self):
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return None

    def max_abs(self):
        return max((abs(c) for c in self.coeffs), default=0)

    def is_real(self, tol=0):
        return all(abs(mpmath.im(c)) <= tol * max(1, abs(c)) for c in self.coeffs)

    def real(self):
        return Polynomial([mpmath.re(c) for c in self.coeffs])

    def to_mp(self):
        return Polynomial([mp.mpmathify(c) for c in self.coeffs])


X = Polynomial([0, 1])


def coeff_distance(p, q):
    """Max coefficientwise distance between two polynomials."""
    n = max(len(p.coeffs), len(q.coeffs))
    return max((abs(p.coeff(k) - q.coeff(k)) for k in range(n)), default=mp.zero)
