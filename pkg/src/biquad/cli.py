"""Command-line interface.

Exit codes distinguish mathematically negative answers from operational
failures so pipelines can branch on verdicts:

    0  success / affirmative (PSD, dominated, verified, report produced)
    1  negative verdict (not PSD, not dominated, verification failed,
       suspected infeasibility, audit found disagreements)
    2  usage or I/O error (bad flags, malformed JSON, dimension mismatch)

All reports are single JSON documents on stdout with sorted keys; identical
argv and seed give byte-identical output. Rational inputs are written "p/q"
or "p".
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import classes, dominance, gram, jsonio, monic
from .core import (
    MonicParams,
    evaluate,
    expand_certificate,
    symmetrize,
    tensors_equal,
)

# argparse refuses option values that start with '-' unless they look like
# negative numbers; widen its matcher so "-1/3", "-0.5" and vector values
# like "-1,2/3" pass through to flags like -a/-b/-c/-x/-y.
_NEGATIVE_RATIONAL = re.compile(r"^-\d+(/\d+)?(,-?\d+(/\d+)?)*$|^-\d*\.\d+$")


def _new_parser(*args, **kwargs) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(*args, **kwargs)
    p._negative_number_matcher = _NEGATIVE_RATIONAL
    return p


def _rational_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational 'p/q': {text!r} ({exc})")


def _rat(v) -> str:
    return jsonio.rational_to_str(v)


def _emit(args, payload: dict) -> None:
    if not getattr(args, "quiet", False):
        sys.stdout.write(jsonio.dumps_canonical(payload))


def _write_or_emit(args, payload: dict) -> None:
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(jsonio.dumps_canonical(payload))
        _emit(args, {"written": str(out)})
    else:
        _emit(args, payload)


def _load_symmetric(path):
    t = jsonio.load_tensor(path)
    return symmetrize(t)


# ---------------------------------------------------------------------------
# subcommand handlers (each returns the exit code)
# ---------------------------------------------------------------------------

def _cmd_check_dd(args) -> int:
    t = _load_symmetric(args.tensor)
    violations = []
    for i in range(1, t.m + 1):
        for j in range(1, t.n + 1):
            bound = dominance.row_bound(t, i, j)
            diag = t.entry(i, j, i, j)
            if diag < bound:
                violations.append({"i": i, "j": j, "diagonal": _rat(diag), "bound": _rat(bound)})
    ok = not violations
    _emit(args, {"diagonally_dominated": ok, "violations": violations})
    return 0 if ok else 1


def _cmd_decompose_dd(args) -> int:
    t = _load_symmetric(args.tensor)
    try:
        cert = dominance.dd_sos_decompose(t)
    except dominance.NotDiagonallyDominantError as exc:
        _emit(args, {"error": "not diagonally dominated",
                     "violating_rows": [p for p, _, _ in exc.violations]})
        return 1
    _write_or_emit(args, jsonio.certificate_to_dict(cert))
    return 0


def _monic_report(p: MonicParams) -> dict:
    psd, report = monic.psd_conditions(p)
    lam = monic.barycentric(p)
    return {
        "m": p.m,
        "n": p.n,
        "a": _rat(p.a),
        "b": _rat(p.b),
        "c": _rat(p.c),
        "psd": psd,
        "conditions": {e.label: (e.value >= 0 if e.applicable else None) for e in report.entries},
        "eigenvalues": {e.label: (_rat(e.value) if e.applicable else None) for e in report.entries},
        "barycentric": [_rat(w) for w in lam] if lam is not None else None,
    }


def _cmd_classify_monic(args) -> int:
    p = MonicParams(args.m, args.n, args.a, args.b, args.c)
    report = _monic_report(p)
    _emit(args, report)
    return 0 if report["psd"] else 1


def _cmd_decompose_monic(args) -> int:
    p = MonicParams(args.m, args.n, args.a, args.b, args.c)
    cert = monic.monic_sos_decompose(p)
    if cert is None:
        _emit(args, {"error": "form is not PSD", "psd": False})
        return 1
    _write_or_emit(args, jsonio.certificate_to_dict(cert))
    return 0


def _cmd_vertices(args) -> int:
    tet = monic.tetrahedron(args.m, args.n)
    payload = {"m": args.m, "n": args.n}
    for idx, vert in enumerate(tet.vertices, start=1):
        payload[f"V{idx}"] = [_rat(c) for c in vert]
    _emit(args, payload)
    return 0


def _cmd_audit_grid(args) -> int:
    step = args.step
    span = args.range
    if step <= 0 or span <= 0:
        raise ValueError("--step and --range must be positive rationals")
    count = int(2 * span / step)
    values = [-span + k * step for k in range(count + 1)]
    disagreements = []
    points = 0
    for a in values:
        for b in values:
            for c in values:
                points += 1
                p = MonicParams(args.m, args.n, a, b, c)
                if not monic.membership_equivalence_check(p):
                    disagreements.append([_rat(a), _rat(b), _rat(c)])
    _emit(args, {
        "m": args.m, "n": args.n,
        "step": _rat(step), "range": _rat(span), "points": points,
        "disagreements": disagreements, "agree": not disagreements,
    })
    return 0 if not disagreements else 1


def _cmd_classify(args) -> int:
    t = _load_symmetric(args.tensor)
    rep = classes.classify(t, seed=args.seed)
    mt = rep.m_tensor
    _emit(args, {
        "is_z": rep.is_z,
        "is_b0": rep.is_b0,
        "is_dd": rep.is_dd,
        "m_tensor": {
            "alpha": _rat(mt.alpha) if mt.alpha is not None else None,
            "lambda_max_estimate": mt.lambda_max_estimate,
            "verdict": mt.verdict,
        },
    })
    return 0


def _cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    t = classes.gen_tensor(args.klass, args.m, args.n, rng)
    _write_or_emit(args, jsonio.tensor_to_dict(t))
    return 0


def _cmd_probe(args) -> int:
    t = _load_symmetric(args.tensor)
    res = gram.sos_probe(t, max_iter=args.max_iter, tol=args.tol)
    payload = {
        "status": res.status,
        "certified": res.certified,
        "iterations": res.iterations,
        "residual_affine": res.residuals.residual_affine,
        "residual_psd": res.residuals.residual_psd,
        "certificate": jsonio.certificate_to_dict(res.certificate) if res.certificate else None,
    }
    if args.trace:
        payload["trace"] = res.trace
    _emit(args, payload)
    return 1 if res.status == "infeasible_suspected" else 0


def _cmd_sweep(args) -> int:
    fixture_dir = None
    if args.output:
        fixture_dir = Path(args.output).resolve().parent
    rows = gram.conjecture_sweep(args.klass, args.trials, args.seed, args.m, args.n,
                                 max_iter=args.max_iter, tol=args.tol,
                                 fixture_dir=fixture_dir)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            gram.write_sweep_csv(rows, fh)
        _emit(args, {"trials": args.trials, "counts": gram.sweep_counts(rows),
                     "csv": str(args.output)})
    else:
        gram.write_sweep_csv(rows, sys.stdout)
    return 0


def _cmd_verify(args) -> int:
    cert = jsonio.load_certificate(args.certificate)
    t = _load_symmetric(args.tensor)
    expanded = expand_certificate(cert)
    if (expanded.m, expanded.n) != (t.m, t.n):
        raise ValueError(f"certificate is ({expanded.m},{expanded.n}) but tensor is ({t.m},{t.n})")
    ok = tensors_equal(expanded, t)
    _emit(args, {"match": ok})
    return 0 if ok else 1


def _parse_vector(text: str, length: int, name: str) -> list[Fraction]:
    parts = [s for s in text.split(",") if s.strip()]
    if len(parts) != length:
        raise ValueError(f"{name} needs {length} comma-separated rationals, got {len(parts)}")
    return [Fraction(s.strip()) for s in parts]


def _cmd_eval(args) -> int:
    t = jsonio.load_tensor(args.tensor)
    x = _parse_vector(args.x, t.m, "-x")
    y = _parse_vector(args.y, t.n, "-y")
    _emit(args, {"value": _rat(evaluate(t, x, y))})
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--quiet", action="store_true", help="suppress the JSON report")
    p._negative_number_matcher = _NEGATIVE_RATIONAL


def _add_dims(p: argparse.ArgumentParser) -> None:
    p.add_argument("-m", type=int, required=True, help="x dimension")
    p.add_argument("-n", type=int, required=True, help="y dimension")


def _add_abc(p: argparse.ArgumentParser) -> None:
    p.add_argument("-a", type=_rational_arg, required=True, help="coefficient a (rational)")
    p.add_argument("-b", type=_rational_arg, required=True, help="coefficient b (rational)")
    p.add_argument("-c", type=_rational_arg, required=True, help="coefficient c (rational)")


def build_parser() -> argparse.ArgumentParser:
    parser = _new_parser(prog="biquad",
                         description="Exact certificates for structured biquadratic tensors")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p._negative_number_matcher = _NEGATIVE_RATIONAL
        _add_common(p)
        return p

    p = add("check-dd", _cmd_check_dd, "test diagonal dominance of a tensor file")
    p.add_argument("tensor")

    p = add("decompose-dd", _cmd_decompose_dd, "square certificate via diagonal dominance")
    p.add_argument("tensor")
    p.add_argument("-o", "--output", help="write the certificate JSON here")

    p = add("classify-monic", _cmd_classify_monic, "PSD classification of a monic symmetric form")
    _add_dims(p)
    _add_abc(p)

    p = add("decompose-monic", _cmd_decompose_monic, "square certificate of a PSD monic form")
    _add_dims(p)
    _add_abc(p)
    p.add_argument("-o", "--output", help="write the certificate JSON here")

    p = add("vertices", _cmd_vertices, "vertices of the monic PSD tetrahedron")
    _add_dims(p)

    p = add("audit-grid", _cmd_audit_grid, "audit classifier/tetrahedron agreement on a grid")
    _add_dims(p)
    p.add_argument("--step", type=_rational_arg, default=Fraction(1, 5))
    p.add_argument("--range", type=_rational_arg, default=Fraction(2))

    p = add("classify", _cmd_classify, "structured-class membership report")
    p.add_argument("tensor")

    p = add("gen", _cmd_gen, "generate a random member of a structured class")
    p.add_argument("--class", dest="klass", required=True, choices=classes.GENERATOR_CLASSES)
    _add_dims(p)
    p.add_argument("-o", "--output", help="write the tensor JSON here")

    p = add("probe", _cmd_probe, "alternating-projection search for a certificate")
    p.add_argument("tensor")
    p.add_argument("--max-iter", type=int, default=5000)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--trace", action="store_true", help="include the residual trace")

    p = add("sweep", _cmd_sweep, "probe a batch of random class members, emit CSV")
    p.add_argument("--class", dest="klass", required=True, choices=tuple(gram.SWEEP_CLASSES))
    _add_dims(p)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("-o", "--output", help="write the CSV here (infeasible fixtures go beside it)")

    p = add("verify", _cmd_verify, "re-check a certificate file against a tensor file")
    p.add_argument("certificate")
    p.add_argument("tensor")

    p = add("eval", _cmd_eval, "evaluate a tensor's form at rational vectors")
    p.add_argument("tensor")
    p.add_argument("-x", required=True, help="comma-separated rationals, length m")
    p.add_argument("-y", required=True, help="comma-separated rationals, length n")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; preserve both.
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
              file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, IndexError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def app() -> None:
    sys.exit(main())


if __name__ == "__main__":
    app()
