"""``invstep`` command-line interface.

Exit codes: 0 success (``verify``: invariant), 1 not invariant or no positive
threshold, 2 input error, 3 a ``--check`` re-validation failed.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence, TextIO

from .document import (INFINITY, ResultDocument, check_document, decimal12, euler_document,
                       parse_document, rational_document, serialize, taylor_document)
from .euler import Polytope, vertex_epsilon
from .exceptions import NoPositiveThresholdError, NotInvariantError
from .invariance import Polyhedron, verify_continuous
from .linalg import as_fraction
from .poly import (DEFAULT_EPS, FirstZeroResult, Polynomial, cauchy_bound, count_zeros,
                   first_positive_zero, first_sign_crossing, no_zero_bound, sturm_chain)
from .problem import Problem, ProblemError, load_problem
from .rational import rational_threshold
from .taylor import taylor_threshold

EXIT_OK = 0
EXIT_NOT_INVARIANT = 1
EXIT_INPUT = 2
EXIT_CHECK = 3


def _fraction_arg(text: str) -> Fraction:
    try:
        v = as_fraction(text)
    except (TypeError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invstep",
        description="Invariance-preserving steplength thresholds for linear systems on polyhedra.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="decide continuous invariance of the set")
    v.add_argument("file")
    v.add_argument("--json", action="store_true", help="emit the JSON result document")
    v.add_argument("--check", action="store_true", help="re-validate emitted certificates")

    t = sub.add_parser("threshold", help="compute a steplength threshold for the scheme")
    t.add_argument("file")
    t.add_argument("--certificate", action="store_true", help="include certificates in the output")
    t.add_argument("--eps", type=_fraction_arg, default=None, help="bisection precision (rational)")
    t.add_argument("--max-order", type=int, default=None, help="derivative orders to check for rational maps")
    t.add_argument("--check", action="store_true", help="re-validate emitted certificates")
    t.add_argument("--json", action="store_true", help="emit the JSON result document")

    r = sub.add_parser("roots", help="Sturm-based first positive zero of a polynomial")
    r.add_argument("file", nargs="?", help="JSON file with a 'coeffs' list")
    r.add_argument("--coeffs", help='coefficients, constant term first, e.g. "1 -4/3 1/3"')
    r.add_argument("--eps", type=_fraction_arg, default=DEFAULT_EPS)
    return parser


def _emit(doc: ResultDocument, args, out: TextIO) -> None:
    if args.json:
        d = doc.to_dict()
        if doc.command == "threshold" and not args.certificate:
            d.pop("certificates")
        import json
        out.write(json.dumps(d, indent=2) + "\n")
        return
    if doc.command == "verify":
        out.write(f"invariant: {'yes' if doc.invariant else 'no'}\n")
    else:
        out.write(f"method: {doc.method}\n")
        if doc.gamma_star is not None:
            out.write(f"gamma*: {doc.gamma_star}\n")
        exact = INFINITY if doc.threshold is None else str(doc.threshold)
        out.write(f"threshold: {exact}\n")
        out.write(f"threshold (decimal): {decimal12(doc.threshold)}\n")
    if doc.provenance:
        out.write(f"provenance: {doc.provenance}\n")
    if doc.command == "verify" or args.certificate:
        for key, val in doc.to_dict()["certificates"].items():
            out.write(f"{key}: {val}\n")


def _run_check(doc: ResultDocument, problem: Problem, err: TextIO) -> int:
    # re-read the serialized form so the check sees exactly what was emitted
    again = parse_document(serialize(doc))
    failures = check_document(again, problem)
    if failures:
        for f in failures:
            err.write(f"CHECK FAILED: {f}\n")
        return EXIT_CHECK
    err.write("check: all certificates re-validated\n")
    return EXIT_OK


def cmd_verify(args, out: TextIO, err: TextIO) -> int:
    problem = load_problem(args.file)
    if isinstance(problem.set, Polyhedron):
        cert = verify_continuous(problem.system, problem.set)
        doc = ResultDocument("verify", "halfspace", invariant=cert is not None,
                             certificates={"H": cert.H} if cert else {},
                             provenance="linear feasibility of H >=_o 0, HG = GA, Hb <= 0")
    else:
        P: Polytope = problem.set
        entries = []
        for i in range(len(P)):
            try:
                ve = vertex_epsilon(problem.system, P, i)
                entries.append({"vertex": i, "member": True, "gammas": list(ve.gammas)})
            except NotInvariantError:
                entries.append({"vertex": i, "member": False})
        ok = all(e["member"] for e in entries)
        doc = ResultDocument("verify", "vertices", invariant=ok,
                             certificates={"tangent_cone": entries},
                             provenance="A x_i in the tangent cone at every vertex")
    _emit(doc, args, out)
    if args.check:
        rc = _run_check(doc, problem, err)
        if rc:
            return rc
    return EXIT_OK if doc.invariant else EXIT_NOT_INVARIANT


def threshold_document(problem: Problem, eps: Optional[Fraction] = None,
                       max_order: Optional[int] = None) -> ResultDocument:
    """Dispatch on the scheme kind; raises :class:`ProblemError` on a set mismatch."""
    scheme = problem.scheme
    if scheme is None:
        raise ProblemError("threshold needs a scheme", "scheme")
    eps = problem.eps if eps is None else eps
    max_order = problem.max_order if max_order is None else max_order
    if scheme.kind == "euler":
        if not isinstance(problem.set, Polytope):
            raise ProblemError("the euler scheme needs a vertex-form set", "set.kind")
        from .euler import euler_threshold
        return euler_document(euler_threshold(problem.system, problem.set))
    if not isinstance(problem.set, Polyhedron):
        raise ProblemError(f"the {scheme.kind} scheme needs a halfspace-form set", "set.kind")
    if scheme.kind in ("taylor", "polynomial"):
        if not scheme.polynomial.nonnegative:
            raise ProblemError("threshold needs all sigma_i >= 0", "scheme.sigmas")
        rep = taylor_threshold(problem.system, problem.set, scheme.polynomial, eps)
        return taylor_document(rep, scheme.kind)
    rep = rational_threshold(problem.system, problem.set, scheme.rational, max_order, eps)
    return rational_document(rep, scheme.rational)


def cmd_threshold(args, out: TextIO, err: TextIO) -> int:
    problem = load_problem(args.file)
    if args.max_order is not None and args.max_order < 0:
        raise ProblemError("must be nonnegative", "--max-order")
    try:
        doc = threshold_document(problem, args.eps, args.max_order)
    except NotInvariantError as exc:
        err.write(f"not invariant: {exc}\n")
        return EXIT_NOT_INVARIANT
    except NoPositiveThresholdError as exc:
        err.write(f"no positive threshold: {exc}\n")
        return EXIT_NOT_INVARIANT
    except ValueError as exc:
        if isinstance(exc, ProblemError):
            raise
        raise ProblemError(str(exc), "scheme") from None
    _emit(doc, args, out)
    if args.check:
        return _run_check(doc, problem, err)
    return EXIT_OK


def _describe(z: FirstZeroResult) -> str:
    if z.kind == FirstZeroResult.NONE:
        return "none"
    if z.kind == FirstZeroResult.EXACT:
        return f"{z.value} (exact)"
    return f"in [{z.lo}, {z.hi}] (~{decimal12(z.lo)})"


def cmd_roots(args, out: TextIO, err: TextIO) -> int:
    if (args.coeffs is None) == (args.file is None):
        raise ProblemError("give exactly one of a file or --coeffs", "roots")
    if args.coeffs is not None:
        raw = args.coeffs.replace(",", " ").split()
        where = "--coeffs"
    else:
        import json
        try:
            with open(args.file, encoding="utf-8") as fh:
                data = json.loads(fh.read(), parse_float=str)
        except (OSError, json.JSONDecodeError) as exc:
            raise ProblemError(str(exc), args.file) from None
        if not isinstance(data, dict) or not isinstance(data.get("coeffs"), list):
            raise ProblemError("expected an object with a 'coeffs' list", args.file)
        raw = data["coeffs"]
        where = "coeffs"
    try:
        f = Polynomial([as_fraction(c) for c in raw])
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ProblemError(str(exc), where) from None
    if f.is_zero:
        raise ProblemError("zero polynomial", where)
    out.write(f"polynomial: {f}\n")
    k = f.low_order()
    if k:
        out.write(f"zero at t = 0 of multiplicity {k}; searching f / t^{k}\n")
        f = f.shift_down(k)
    if f.coeffs[0] < 0:
        f = -f
    out.write(f"sturm chain degrees: {' '.join(str(d) for d in sturm_chain(f).degrees)}\n")
    if f.degree == 0:
        out.write("first positive zero: none\nfirst sign crossing: none\n")
        return EXIT_OK
    if f.leading > 0:
        bound, label = no_zero_bound(f), "no-zero bound"
    else:
        bound, label = cauchy_bound(f), "Cauchy bound"
    out.write(f"bound: {bound} ({label})\n")
    out.write(f"zeros in [0, {bound}]: {count_zeros(f, 0, bound)}\n")
    fz = first_positive_zero(f, args.eps)
    out.write("first positive zero: " + ("no positive zero" if not fz.found else _describe(fz)) + "\n")
    out.write(f"first sign crossing: {_describe(first_sign_crossing(f, args.eps))}\n")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    handler = {"verify": cmd_verify, "threshold": cmd_threshold, "roots": cmd_roots}[args.command]
    try:
        return handler(args, out, err)
    except ProblemError as exc:
        err.write(f"input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
