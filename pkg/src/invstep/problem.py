"""Reading JSON problem files.

Numbers may be JSON integers, decimal literals, or strings holding an
integer, a finite decimal or ``"p/q"``; all are read exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Union

from .euler import Polytope
from .invariance import LinearSystem, Polyhedron
from .linalg import Matrix, as_fraction
from .poly import DEFAULT_EPS, Polynomial
from .rational import RationalFunction
from .taylor import PolynomialScheme

SCHEME_KINDS = ("taylor", "polynomial", "rational", "euler")


class ProblemError(ValueError):
    """Malformed problem file; ``where`` names the offending field or line."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


@dataclass(frozen=True)
class Scheme:
    kind: str
    polynomial: Optional[PolynomialScheme] = None
    rational: Optional[RationalFunction] = None
    p: Optional[int] = None


@dataclass(frozen=True)
class Problem:
    system: LinearSystem
    set: Union[Polyhedron, Polytope]
    scheme: Optional[Scheme] = None
    eps: Fraction = DEFAULT_EPS
    max_order: Optional[int] = None

    @property
    def halfspace(self) -> bool:
        return isinstance(self.set, Polyhedron)


def _num(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or x is None:
        raise ProblemError("expected a number", where)
    try:
        return as_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ProblemError(str(exc), where) from None


def _vector(x: Any, where: str) -> tuple:
    if not isinstance(x, list) or not x:
        raise ProblemError("expected a non-empty list of numbers", where)
    return tuple(_num(v, f"{where}[{i}]") for i, v in enumerate(x))


def _matrix(x: Any, where: str) -> Matrix:
    if not isinstance(x, list) or not x:
        raise ProblemError("expected a non-empty list of rows", where)
    rows = [_vector(r, f"{where}[{i}]") for i, r in enumerate(x)]
    if any(len(r) != len(rows[0]) for r in rows):
        raise ProblemError("rows have different lengths", where)
    return Matrix(rows)


def _require(d: dict, key: str, where: str) -> Any:
    if key not in d:
        raise ProblemError(f"missing required key {key!r}", where or "<root>")
    return d[key]


def _parse_set(s: Any, n: int) -> Union[Polyhedron, Polytope]:
    if not isinstance(s, dict):
        raise ProblemError("expected an object", "set")
    kind = _require(s, "kind", "set")
    if kind == "halfspace":
        G = _matrix(_require(s, "G", "set"), "set.G")
        b = _vector(_require(s, "b", "set"), "set.b")
        if len(b) != G.rows:
            raise ProblemError(f"G has {G.rows} rows but b has {len(b)} entries", "set.b")
        if G.cols != n:
            raise ProblemError(f"G has {G.cols} columns, system has dimension {n}", "set.G")
        return Polyhedron(G, b)
    if kind == "vertices":
        pts = _require(s, "points", "set")
        if not isinstance(pts, list) or not pts:
            raise ProblemError("expected a non-empty list of points", "set.points")
        vs = [_vector(p, f"set.points[{i}]") for i, p in enumerate(pts)]
        for i, v in enumerate(vs):
            if len(v) != n:
                raise ProblemError(f"point has dimension {len(v)}, system has {n}", f"set.points[{i}]")
        return Polytope(tuple(vs))
    raise ProblemError(f"unknown set kind {kind!r} (halfspace or vertices)", "set.kind")


def _parse_scheme(s: Any) -> Scheme:
    if not isinstance(s, dict):
        raise ProblemError("expected an object", "scheme")
    kind = _require(s, "kind", "scheme")
    if kind == "taylor":
        p = _require(s, "p", "scheme")
        if isinstance(p, bool) or not isinstance(p, int) or p < 1:
            raise ProblemError("order p must be a positive integer", "scheme.p")
        return Scheme(kind, polynomial=PolynomialScheme.taylor(p), p=p)
    if kind == "polynomial":
        sig = _vector(_require(s, "sigmas", "scheme"), "scheme.sigmas")
        try:
            return Scheme(kind, polynomial=PolynomialScheme(sig))
        except ValueError as exc:
            raise ProblemError(str(exc), "scheme.sigmas") from None
    if kind == "rational":
        g = Polynomial(_vector(_require(s, "numerator", "scheme"), "scheme.numerator"))
        h = Polynomial(_vector(_require(s, "denominator", "scheme"), "scheme.denominator"))
        if h.is_zero:
            raise ProblemError("denominator is identically zero", "scheme.denominator")
        r = RationalFunction(g, h)
        if r.h(0) == 0 or r(0) != 1:
            raise ProblemError("rational map must satisfy r(0) = 1", "scheme")
        return Scheme(kind, rational=r)
    if kind == "euler":
        return Scheme(kind)
    raise ProblemError(f"unknown scheme kind {kind!r} (one of {', '.join(SCHEME_KINDS)})", "scheme.kind")


def parse_problem(data: Any) -> Problem:
    if not isinstance(data, dict):
        raise ProblemError("problem file must hold a JSON object", "<root>")
    A = _matrix(_require(data, "system", ""), "system")
    if not A.is_square:
        raise ProblemError("system matrix must be square", "system")
    pset = _parse_set(_require(data, "set", ""), A.rows)
    scheme = _parse_scheme(data["scheme"]) if data.get("scheme") is not None else None
    opts = data.get("options") or {}
    if not isinstance(opts, dict):
        raise ProblemError("expected an object", "options")
    eps = _num(opts["eps"], "options.eps") if "eps" in opts else DEFAULT_EPS
    if eps <= 0:
        raise ProblemError("eps must be positive", "options.eps")
    max_order = opts.get("max_order")
    if max_order is not None and (isinstance(max_order, bool) or not isinstance(max_order, int)
                                  or max_order < 0):
        raise ProblemError("max_order must be a nonnegative integer", "options.max_order")
    return Problem(LinearSystem(A), pset, scheme, eps, max_order)


def loads_problem(text: str) -> Problem:
    try:
        data = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise ProblemError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return parse_problem(data)


def load_problem(path: str) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemError(exc.strerror or str(exc), path) from None
    return loads_problem(text)
