import os
from dataclasses import dataclass, replace

from mpmath import mpf

ENV_PRECISION = "KLEINTRACE_PRECISION_BITS"

# strip-boundary and root-merging tolerance
DELTA_STRIP = 1e-12
# minimum distance of a quadrature/evaluation point from an axis pole
DELTA_POLE = 1e-10


def default_precision_bits():
    value = os.environ.get(ENV_PRECISION)
    return int(value) if value else 256


@dataclass(frozen=True)
class PrecisionConfig:
    """Numerical knobs shared by the quadrature and recurrence pipelines.

    ``target_abs_error`` and ``gl_order`` default to values tied to
    ``precision_bits``: the target is ``2**(-bits/2)`` and the Gauss-Legendre
    order is 32 per 256 bits.  Errors are absolute on the scale
    ``max(1, integral of |x^r w|)``.
    """

    precision_bits: int = 256
    target_abs_error: float | None = None
    gl_order: int | None = None
    max_panels: int = 20000
    max_precision_bits: int = 1024
    max_recurrence_bits: int = 4096
    recurrence_rtol: float = 1e-20
    hankel_depth: int = 12
    max_test_degree: int = 6
    tail_length: int = 8

    @property
    def target(self):
        if self.target_abs_error is not None:
            return mpf(self.target_abs_error)
        return mpf(2) ** (-(self.precision_bits // 2))

    @property
    def order(self):
        if self.gl_order is not None:
            return self.gl_order
        return 32 * max(1, self.precision_bits // 256)

    def doubled(self):
        """Config with doubled precision (and, when derived, tighter target)."""
        target = self.target_abs_error
        if target is not None:
            target = target ** 2
        return replace(self, precision_bits=2 * self.precision_bits, target_abs_error=target)
