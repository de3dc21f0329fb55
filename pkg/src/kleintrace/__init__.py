"""Twisted traces on quantizations of type A Kleinian singularities.

The pipeline runs from quantization data ``P, c, epsilon`` to a weight
function on the imaginary axis, its moments, the orthogonal polynomials of
the trace (the short star-product), their Pade/Lax structure, the
nonlinear recurrences for two small families, and positivity decisions.
"""

from .config import PrecisionConfig
from .errors import (
    DegeneratePade,
    DegenerateTrace,
    KleinTraceError,
    PrecisionUnreachable,
    SingularStep,
    UnsupportedShape,
    ValidationError,
)
from .exactformulas import (
    ExactTraceValues,
    alpha_n3,
    alpha_n4,
    tau_n4,
    trace_values_n3,
    trace_values_n4,
)
from .moments import MomentTable, moment_table, shifted_measure_moments, verify_trace_axiom
from .orthopoly import RecurrenceCoeffs, recurrence_coeffs, stable_recurrence, stieltjes_series
from .painleve import crosscheck, run_x2, run_x3_even
from .params import QuantizationSpec, check_reality, derive_constants, reduce_to_strip
from .polynomial import Polynomial
from .positivity import cone_description, decide_positivity, even_cone_dimension, is_positive_G
from .weight import WeightSpec, build_weight

__version__ = "0.1.0"

__all__ = [
    "PrecisionConfig", "KleinTraceError", "ValidationError", "PrecisionUnreachable",
    "UnsupportedShape", "DegenerateTrace", "DegeneratePade", "SingularStep",
    "ExactTraceValues", "alpha_n3", "alpha_n4", "tau_n4", "trace_values_n3", "trace_values_n4",
    "MomentTable", "moment_table", "shifted_measure_moments", "verify_trace_axiom",
    "RecurrenceCoeffs", "recurrence_coeffs", "stable_recurrence", "stieltjes_series",
    "crosscheck", "run_x2", "run_x3_even",
    "QuantizationSpec", "check_reality", "derive_constants", "reduce_to_strip",
    "Polynomial", "cone_description", "decide_positivity", "even_cone_dimension",
    "is_positive_G", "WeightSpec", "build_weight",
]
