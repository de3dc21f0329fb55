"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 precision budget exhausted, 4 unsupported shape.
"""

import argparse
import csv
import io
import json
import math
import os
import random
import sys
import tempfile
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from . import exactformulas
from .config import ENV_PRECISION, PrecisionConfig, default_precision_bits
from .errors import (
    DegenerateTrace,
    KleinTraceError,
    PrecisionUnreachable,
    SingularStep,
    UnsupportedShape,
    ValidationError,
)
from .moments import moment_table, verify_trace_axiom
from .orthopoly import (
    orthogonal_polynomials,
    stable_recurrence,
    star_product_row,
    stieltjes_series,
    verify_stieltjes_polynomiality,
)
from .pade_lax import (
    asymptotic_extract,
    build_lax,
    det_residual,
    expected_asymptotics,
    pade_denominator,
    verify_difference_equation,
)
from .painleve import classify_family, crosscheck, run_x2, run_x3_even, seeds_from_moments
from .params import QuantizationSpec, derive_constants
from .polynomial import Polynomial, coeff_distance
from .positivity import cone_description, decide_positivity, even_cone_dimension
from .weight import build_weight

EXIT_OK, EXIT_CHECK_FAILED, EXIT_VALIDATION, EXIT_PRECISION, EXIT_UNSUPPORTED = 0, 1, 2, 3, 4

SPEC_KEYS = ("P_roots", "c", "epsilon", "G", "atoms", "precision_bits", "K", "format")


# ----------------------------------------------------------------- parsing


def _number(v, what):
    if isinstance(v, bool) or v is None:
        raise ValidationError(f"{what}: expected a number, got {v!r}")
    if isinstance(v, str):
        s = v.strip()
        try:
            if "/" in s:
                fr = Fraction(s)
                return mpf(fr.numerator) / fr.denominator
            return mpf(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"{what}: cannot parse {v!r}") from exc
    if isinstance(v, (int, float)):
        return mpf(v)
    raise ValidationError(f"{what}: expected a number, got {v!r}")


def _epsilon(v):
    if v in ("+", "+1", 1):
        return 1
    if v in ("-", "−", "-1", -1):
        return -1
    raise ValidationError(f"epsilon must be '+' or '-', got {v!r}")


def load_problem(path):
    """Read a problem spec (or a previous JSON output embedding one)."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON ({exc})") from exc
    if isinstance(data, dict) and isinstance(data.get("spec"), dict):
        data = data["spec"]
    if not isinstance(data, dict):
        raise ValidationError("problem spec must be a JSON object")
    unknown = set(data) - set(SPEC_KEYS)
    if unknown:
        raise ValidationError(f"unknown spec keys: {sorted(unknown)}")
    if "P_roots" not in data:
        raise ValidationError("spec needs P_roots")
    return data


class Problem:
    """Parsed problem spec plus resolved run settings."""

    def __init__(self, raw, args):
        self.raw = raw
        bits = getattr(args, "precision_bits", None) or raw.get("precision_bits") \
            or default_precision_bits()
        if not isinstance(bits, int) or bits < 32:
            raise ValidationError(f"precision_bits must be an integer >= 32, got {bits!r}")
        self.bits = bits
        K = getattr(args, "K", None)
        self.K = K if K is not None else raw.get("K", 10)
        if not isinstance(self.K, int) or self.K < 0:
            raise ValidationError(f"K must be a nonnegative integer, got {self.K!r}")
        self.cfg = PrecisionConfig(precision_bits=bits,
                                   max_recurrence_bits=getattr(args, "max_bits", None) or 4096)
        with mpmath.workprec(bits):
            roots = []
            for k, pair in enumerate(raw["P_roots"]):
                if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                    raise ValidationError(f"P_roots[{k}] must be a [re, im] pair")
                roots.append(mpc(_number(pair[0], f"P_roots[{k}][0]"),
                                 _number(pair[1], f"P_roots[{k}][1]")))
            if not roots:
                raise ValidationError("P_roots must not be empty")
            self.spec = QuantizationSpec(roots, c=_number(raw.get("c", 0), "c"),
                                         epsilon=_epsilon(raw.get("epsilon", "+")))
            self.G = Polynomial([_number(v, f"G[{k}]") for k, v in enumerate(raw.get("G", []))])
            self.atoms = []
            for k, atom in enumerate(raw.get("atoms", [])):
                if not isinstance(atom, dict) or set(atom) != {"y", "mass"}:
                    raise ValidationError(f"atoms[{k}] must be an object with keys y and mass")
                self.atoms.append({"y": _number(atom["y"], f"atoms[{k}].y"),
                                   "mass": _number(atom["mass"], f"atoms[{k}].mass")})

    def weight(self):
        with mpmath.workprec(self.bits):
            return build_weight(self.spec, self.G, self.atoms)

    @property
    def digits(self):
        return int(math.floor(self.bits * 0.30103))


# ----------------------------------------------------------------- output


def _fmt(v, digits):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    return mpmath.nstr(v, digits, min_fixed=-4, max_fixed=digits)


def _split(v, digits):
    v = mpc(v)
    return _fmt(v.real, digits), _fmt(v.imag, digits)


def _poly_str(p):
    terms = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        c = mpc(c).real
        coef = "" if c == 1 and k else mpmath.nstr(c, 15)
        mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
        terms.append(f"{coef}{'*' if coef and mono else ''}{mono}")
    return " + ".join(terms) if terms else "0"


def _write(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".kleintrace-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(payload, columns, rows, fmt, out):
    """JSON: ``payload`` plus ``rows`` as objects; CSV: header plus rows only."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        doc = dict(payload)
        if columns:
            doc["rows"] = [dict(zip(columns, r)) for r in rows]
        text = json.dumps(doc, indent=2) + "\n"
    _write(text, out)


def _format(args, problem=None):
    if args.format:
        return args.format
    if problem is not None and problem.raw.get("format") in ("json", "csv"):
        return problem.raw["format"]
    return "json"


def _base_payload(problem, command):
    return {"command": command, "precision_bits": problem.bits, "digits": problem.digits,
            "spec": problem.raw}


# ----------------------------------------------------------------- commands


def cmd_moments(args):
    problem = Problem(load_problem(args.spec), args)
    r_max = args.r_max if args.r_max is not None else 2 * problem.K
    table = moment_table(problem.weight(), r_max, problem.cfg)
    d = problem.digits
    rows = [(r, *_split(v, d), _fmt(e, 6)) for r, (v, e) in
            enumerate(zip(table.values, table.error_estimates))]
    emit(_base_payload(problem, "moments"), ["r", "re", "im", "error"], rows,
         _format(args, problem), args.out)
    return EXIT_OK


def _recurrence(problem):
    return stable_recurrence(problem.weight(), problem.K, problem.cfg)


def cmd_recurrence(args):
    problem = Problem(load_problem(args.spec), args)
    rc = _recurrence(problem)
    d = problem.digits
    rows = []
    for k in range(problem.K + 1):
        rows.append((k, *_split(rc.a[k], d), *_split(rc.b[k], d)))
    payload = _base_payload(problem, "recurrence")
    payload["recurrence_bits"] = rc.precision_bits
    emit(payload, ["k", "a_re", "a_im", "b_re", "b_im"], rows, _format(args, problem), args.out)
    return EXIT_OK


def cmd_starprod(args):
    problem = Problem(load_problem(args.spec), args)
    rc = _recurrence(problem)
    d = problem.digits
    rows = []
    for k in range(problem.K + 1):
        lead, mid, low = star_product_row(rc, k)
        rows.append((k, lead, *_split(mid, d), *_split(low, d)))
    payload = _base_payload(problem, "starprod")
    payload["convention"] = "z * z^k = z^(k+1) + b_k z^k + a_k z^(k-1) in the orthogonal basis"
    emit(payload, ["k", "coef_k_plus_1", "b_re", "b_im", "a_re", "a_im"], rows,
         _format(args, problem), args.out)
    return EXIT_OK


def cmd_positivity(args):
    fmt = _format(args)
    if args.even is not None:
        if args.epsilon is None:
            raise ValidationError("--even needs --epsilon")
        dim = even_cone_dimension(args.even, _epsilon(args.epsilon))
        payload = {"command": "positivity", "even": True, "n": args.even,
                   "epsilon": args.epsilon, "dimension": dim, "empty": dim < 0}
        emit(payload, [] if fmt == "json" else ["n", "epsilon", "dimension"],
             [(args.even, args.epsilon, dim)], fmt, args.out)
        return EXIT_OK
    if not args.spec:
        raise ValidationError("positivity needs --spec or --even")
    problem = Problem(load_problem(args.spec), args)
    fmt = _format(args, problem)
    with mpmath.workprec(problem.bits):
        cone = cone_description(problem.spec)
        verdict = decide_positivity(problem.spec, problem.G, problem.atoms, problem.cfg,
                                    corroborate=not args.no_hankel)
    payload = _base_payload(problem, "positivity")
    payload.update({
        "positive": verdict.positive,
        "certificate": verdict.certificate,
        "reason": verdict.reason,
        "epsilon_reduced": verdict.epsilon_reduced,
        "cone": {
            "dimension": cone.dimension_mod_scaling,
            "empty": cone.dimension_mod_scaling < 0,
            "degree_bound": cone.degree_bound,
            "require_G0_zero": cone.require_G0_zero,
            "sign_mode": cone.sign_mode,
            "atom_count": cone.atom_count,
            "generators": [_poly_str(g) for g in cone.generators],
        },
    })
    if verdict.hankel_base is not None:
        payload["hankel"] = {
            "base": [_fmt(mpmath.re(v), 8) for v in verdict.hankel_base],
            "shifted": [_fmt(mpmath.re(v), 8) for v in verdict.hankel_shifted],
            "agrees": verdict.hankel_agrees,
        }
    rows = [("positive", verdict.positive), ("certificate", verdict.certificate),
            ("dimension", cone.dimension_mod_scaling),
            ("generators", "; ".join(_poly_str(g) for g in cone.generators))]
    emit(payload, [] if fmt == "json" else ["field", "value"], rows, fmt, args.out)
    return EXIT_OK


def cmd_painleve(args):
    problem = Problem(load_problem(args.spec), args)
    K = problem.K
    with mpmath.workprec(problem.bits):
        family, beta_sq = classify_family(problem.spec)
        t = derive_constants(problem.spec)[0]
        if args.seed_from_moments:
            b0, a1 = seeds_from_moments(moment_table(problem.weight(), 2, problem.cfg))
        else:
            b0 = _number(args.b0, "--b0") if args.b0 is not None else None
            a1 = _number(args.a1, "--a1") if args.a1 is not None else None
        if family == "x2":
            if b0 is None:
                raise ValidationError("the x^2 recurrence needs --b0 or --seed-from-moments")
            rc = run_x2(t, b0, K, problem.cfg)
        else:
            if a1 is None:
                raise ValidationError("the x^3 recurrence needs --a1 or --seed-from-moments")
            rc = run_x3_even(beta_sq, a1, K, problem.cfg)
    d = problem.digits
    rows = [(k, *_split(rc.a[k], d), *_split(rc.b[k], d)) for k in range(K + 1)]
    payload = _base_payload(problem, "painleve")
    payload["family"] = family
    emit(payload, ["k", "a_re", "a_im", "b_re", "b_im"], rows, _format(args, problem), args.out)
    return EXIT_OK


def cmd_exact(args):
    bits = args.precision_bits or default_precision_bits()
    digits = int(math.floor(bits * 0.30103))
    with mpmath.workprec(bits):
        if args.family == "n3":
            if (args.kappa is None) == (args.beta is None):
                raise ValidationError("exact n3 needs exactly one of --kappa, --beta")
            if args.kappa is not None:
                kappa = _number(args.kappa, "--kappa")
                alpha = exactformulas.alpha_n3(kappa)
                if kappa == 0:
                    values = {"alpha": alpha}
                else:
                    v = exactformulas.trace_values_n3(mpmath.sqrt(-kappa - mpf(1) / 4))
                    values = {"alpha": alpha, "T1": v.T1, "Tz2": v.Tz2}
            else:
                v = exactformulas.trace_values_n3(_number(args.beta, "--beta"))
                values = {"alpha": v.alpha, "T1": v.T1, "Tz2": v.Tz2}
        else:
            if args.beta is None or args.gamma is None:
                raise ValidationError("exact n4 needs --beta and --gamma")
            v = exactformulas.trace_values_n4(_number(args.beta, "--beta"),
                                              _number(args.gamma, "--gamma"))
            values = {"alpha": v.alpha, "tau": v.tau, "T1": v.T1, "Tz2": v.Tz2}
        if args.emit:
            if args.emit not in values:
                raise ValidationError(f"--emit {args.emit} is not available for {args.family}")
            values = {args.emit: values[args.emit]}
        text = {k: _fmt(val, digits) for k, val in values.items()}
    fmt = _format(args)
    payload = {"command": "exact", "family": args.family, "precision_bits": bits}
    payload.update(text)
    emit(payload, [] if fmt == "json" else ["name", "value"], list(text.items()), fmt, args.out)
    return EXIT_OK


def _default_tol(bits):
    return mpf(2) ** (-(3 * bits) // 8)


def _verify_axioms(problem, args):
    w = problem.weight()
    rng = random.Random(args.seed)
    worst = mpf(0)
    with mpmath.workprec(problem.bits):
        for _ in range(20):
            deg = rng.randint(0, problem.cfg.max_test_degree)
            S = Polynomial([mpf(rng.uniform(-1, 1)) for _ in range(deg + 1)])
            worst = max(worst, verify_trace_axiom(problem.spec, w, S, problem.cfg))
    return {"max_residual": worst}


def _verify_stieltjes(problem, args):
    order = args.order
    with mpmath.workprec(problem.bits):
        M = moment_table(problem.weight(), order, problem.cfg)
        F = stieltjes_series(M, order)
        t = derive_constants(problem.spec)[0]
        L, tail = verify_stieltjes_polynomiality(F, problem.spec.P, t, tail_length=None)
        scale = max(mpf(1), max(abs(v) for v in M.values))
        out = {"max_tail": tail / scale}
        if abs(t - 1) < mpf(2) ** (-problem.bits // 2):
            out["top_coefficient"] = abs(L.coeff(problem.spec.n - 1)) / scale
    return out


def _verify_pade(problem, args):
    K = min(problem.K, 10)
    with mpmath.workprec(problem.bits):
        M = moment_table(problem.weight(), 2 * K + 1, problem.cfg)
        polys = orthogonal_polynomials(M, K)[0]
        F = stieltjes_series(M, 2 * K + 1)
        worst = mpf(0)
        for n in range(1, K + 1):
            p = pade_denominator(F, n)
            worst = max(worst, coeff_distance(p, polys[n]) / max(mpf(1), polys[n].max_abs()))
    return {"max_coefficient_deviation": worst, "n_max": K}


def _verify_lax(problem, args):
    K = max(1, min(problem.K, 8))
    rng = random.Random(args.seed)
    with mpmath.workprec(problem.bits):
        M = moment_table(problem.weight(), 2 * K + 2, problem.cfg)
        _, a, _, _ = orthogonal_polynomials(M, K)
        F = stieltjes_series(M, 2 * K + 2)
        t = derive_constants(problem.spec)[0]
        det_w = diff_w = asym_w = mpf(0)
        for n in range(1, K + 1):
            lax = build_lax(F, problem.spec.P, t, n)
            det_w = max(det_w, det_residual(lax.A, t))
            samples = [mpc(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(40)]
            diff_w = max(diff_w, verify_difference_equation(lax.A, lax.p_n, lax.p_nm1, samples))
            got = asymptotic_extract(lax.A)
            for key, val in expected_asymptotics(n, t, a[n]).items():
                ref = max(mpf(1), abs(val))
                asym_w = max(asym_w, abs(got[key] - val) / ref)
    return {"det_residual": det_w, "difference_residual": diff_w, "asymptotic_deviation": asym_w,
            "n_max": K}


def _verify_painleve(problem, args):
    res = crosscheck(problem.spec, problem.G, problem.K, problem.cfg)
    return {"family": res["family"], "max_rel_dev_a": res["max_rel_dev_a"],
            "max_rel_dev_b": res["max_rel_dev_b"]}


_CHECKS = {"axioms": _verify_axioms, "stieltjes": _verify_stieltjes, "pade": _verify_pade,
           "lax": _verify_lax, "painleve": _verify_painleve}


def cmd_verify(args):
    problem = Problem(load_problem(args.spec), args)
    with mpmath.workprec(problem.bits):
        tol = _number(args.tol, "--tol") if args.tol is not None else _default_tol(problem.bits)
        result = _CHECKS[args.check](problem, args)
        numeric = {k: v for k, v in result.items() if not isinstance(v, (int, str))}
        passed = all(v <= tol for v in numeric.values())
    payload = _base_payload(problem, "verify")
    payload.update({"check": args.check, "passed": passed, "tolerance": _fmt(tol, 6)})
    payload["residuals"] = {k: _fmt(v, 6) for k, v in result.items()}
    rows = [(k, _fmt(v, 6)) for k, v in result.items()] + [("passed", passed)]
    fmt = _format(args, problem)
    emit(payload, [] if fmt == "json" else ["name", "value"], rows, fmt, args.out)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


# ----------------------------------------------------------------- wiring


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=None,
                        help=f"working precision (default: spec, then ${ENV_PRECISION}, then 256)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--out", default=None, help="write output atomically to this file")

    with_spec = argparse.ArgumentParser(add_help=False, parents=[common])
    with_spec.add_argument("--spec", required=True, help="problem spec JSON file")
    with_spec.add_argument("--K", type=int, default=None, help="recurrence depth")

    parser = argparse.ArgumentParser(prog="kleintrace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", parents=[with_spec], help="trace moments M_r = T(z^r)")
    p.add_argument("--r-max", type=int, default=None)
    p.set_defaults(func=cmd_moments)

    for name, func, text in (("recurrence", cmd_recurrence, "3-term recurrence a_k, b_k"),
                             ("starprod", cmd_starprod, "short star-product coefficients")):
        p = sub.add_parser(name, parents=[with_spec], help=text)
        p.add_argument("--max-bits", type=int, default=None,
                       help="precision cap for the stability escalation (default 4096)")
        p.set_defaults(func=func)

    p = sub.add_parser("positivity", parents=[common], help="positivity verdict and cone")
    p.add_argument("--spec", default=None)
    p.add_argument("--even", type=int, default=None, metavar="N",
                   help="report the even-trace cone dimension for degree N instead")
    p.add_argument("--epsilon", default=None, help="'+' or '-' (with --even)")
    p.add_argument("--no-hankel", action="store_true", help="skip the Hankel corroboration")
    p.set_defaults(func=cmd_positivity)

    p = sub.add_parser("painleve", parents=[with_spec], help="nonlinear recurrence for a_k, b_k")
    p.add_argument("--seed-from-moments", action="store_true")
    p.add_argument("--b0", default=None)
    p.add_argument("--a1", default=None)
    p.set_defaults(func=cmd_painleve)

    p = sub.add_parser("exact", parents=[common], help="closed forms for n = 3, 4")
    p.add_argument("family", choices=("n3", "n4"))
    p.add_argument("--kappa", default=None)
    p.add_argument("--beta", default=None)
    p.add_argument("--gamma", default=None)
    p.add_argument("--emit", choices=("alpha", "tau", "T1", "Tz2"), default=None)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("verify", parents=[with_spec], help="numerical consistency checks")
    p.add_argument("check", choices=sorted(_CHECKS))
    p.add_argument("--tol", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order", type=int, default=24, help="Stieltjes truncation order")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, DegenerateTrace) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (PrecisionUnreachable, SingularStep) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except UnsupportedShape as exc:
        print(f"unsupported shape: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except KleinTraceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
