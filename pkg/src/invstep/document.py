"""Result documents: construction from reports, JSON round trip, re-validation.

Every rational is written as a ``"p/q"`` (or integer) string and infinity as
the literal ``"infinity"``, so the JSON form is exact.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any, Optional

from .euler import EulerThresholdReport, Polytope
from .invariance import ContinuousCertificate, DiscreteCertificate, LinearSystem, Polyhedron
from .linalg import Matrix, is_nonnegative
from .poly import FirstZeroResult, Polynomial
from .problem import Problem
from .rational import (RationalFunction, RationalThresholdReport, derivative_numerator,
                       eval_matrix)
from .taylor import (PolynomialScheme, TaylorThresholdReport, discrete_H_matrix,
                     discrete_matrix, f_coefficient_polys)

INFINITY = "infinity"
_RAT = re.compile(r"^-?\d+(/\d+)?$")


def decimal12(x: Optional[Fraction]) -> str:
    """12 significant digits, or ``"infinity"``."""
    if x is None:
        return INFINITY
    with localcontext() as ctx:
        ctx.prec = 12
        return format(Decimal(x.numerator) / Decimal(x.denominator), "g")


def _enc(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Matrix):
        return [[str(v) for v in x.row(i)] for i in range(x.rows)]
    if isinstance(x, Polynomial):
        return [str(c) for c in x.coeffs]
    if isinstance(x, dict):
        return {k: _enc(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_enc(v) for v in x]
    return x


def _plain(x: Any) -> Any:
    """Matrices and polynomials to nested lists, tuples to lists."""
    if isinstance(x, Matrix):
        return x.tolist()
    if isinstance(x, Polynomial):
        return list(x.coeffs)
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _dec(x: Any) -> Any:
    if isinstance(x, str) and _RAT.match(x):
        return Fraction(x)
    if isinstance(x, dict):
        return {k: _dec(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_dec(v) for v in x]
    return x


@dataclass
class ResultDocument:
    """Outcome of one command.

    ``threshold`` is ``None`` for infinity (threshold documents only);
    ``gamma_star`` is ``None`` when not applicable and ``"unbounded"`` when
    the shift program is unbounded below.
    """

    command: str
    method: str = ""
    invariant: Optional[bool] = None
    threshold: Optional[Fraction] = None
    gamma_star: Any = None
    certificates: dict = field(default_factory=dict)
    provenance: str = ""

    def __post_init__(self):
        self.certificates = _plain(self.certificates)

    def to_dict(self) -> dict:
        d: dict = {"command": self.command, "method": self.method}
        if self.invariant is not None:
            d["invariant"] = self.invariant
        if self.command == "threshold":
            d["threshold"] = {
                "exact": INFINITY if self.threshold is None else str(self.threshold),
                "decimal": decimal12(self.threshold),
            }
        if self.gamma_star is not None:
            d["gamma_star"] = _enc(self.gamma_star)
        d["certificates"] = _enc(self.certificates)
        d["provenance"] = self.provenance
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ResultDocument":
        thr = None
        if d.get("command") == "threshold":
            exact = d["threshold"]["exact"]
            thr = None if exact == INFINITY else Fraction(exact)
        return cls(
            command=d["command"],
            method=d.get("method", ""),
            invariant=d.get("invariant"),
            threshold=thr,
            gamma_star=_dec(d.get("gamma_star")),
            certificates=_dec(d.get("certificates", {})),
            provenance=d.get("provenance", ""),
        )


def serialize(doc: ResultDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2)


def parse_document(text: str) -> ResultDocument:
    return ResultDocument.from_dict(json.loads(text))


def _zero_result(z: FirstZeroResult) -> dict:
    d: dict = {"kind": z.kind}
    if z.kind == FirstZeroResult.EXACT:
        d["value"] = z.value
    elif z.kind == FirstZeroResult.BRACKET:
        d["lo"], d["hi"] = z.lo, z.hi
    return d


def _gamma_field(g: Optional[Fraction]) -> Any:
    return "unbounded" if g is None else g


# builders ---------------------------------------------------------------

def taylor_document(rep: TaylorThresholdReport, method: str) -> ResultDocument:
    certs: dict = {"H": rep.H, "gamma": _gamma_field(rep.gamma), "sigmas": list(rep.scheme.sigmas)}
    if rep.f_polys:
        certs["f_polys"] = rep.f_polys
        certs["sign_crossings"] = [_zero_result(z) for z in rep.per_poly_zeros]
        certs["first_positive_zeros"] = [_zero_result(z) for z in rep.literal_zeros]
    return ResultDocument("threshold", method, threshold=rep.tau.value,
                          gamma_star=_gamma_field(rep.gamma), certificates=certs,
                          provenance=rep.tau.note)


def rational_document(rep: RationalThresholdReport, r: RationalFunction) -> ResultDocument:
    certs: dict = {"H": rep.H, "gamma": _gamma_field(rep.gamma),
                   "numerator": r.g, "denominator": r.h}
    if rep.rho is not None:
        rho = rep.rho
        certs["rho"] = INFINITY if rho.rho is None else rho.rho
        certs["checked_order"] = rho.checked_order
        certs["binding_order"] = rho.binding_order
        certs["exhaustive"] = rho.exhaustive
        certs["constraints"] = [dict(order=i, **_zero_result(z)) for i, z in rho.per_order_constraints]
    return ResultDocument("threshold", "rational", threshold=rep.tau.value,
                          gamma_star=_gamma_field(rep.gamma), certificates=certs,
                          provenance=rep.tau.note)


def euler_document(rep: EulerThresholdReport) -> ResultDocument:
    per = [{"vertex": v.vertex_index,
            "epsilon": INFINITY if v.epsilon is None else v.epsilon,
            "gammas": list(v.gammas)} for v in rep.per_vertex]
    return ResultDocument("threshold", "euler", threshold=rep.tau.value,
                          certificates={"per_vertex": per}, provenance=rep.tau.note)


# re-validation ----------------------------------------------------------

def _as_matrix(x: Any) -> Matrix:
    return Matrix(x)


def check_document(doc: ResultDocument, problem: Problem) -> list[str]:
    """Re-validate every certificate in ``doc`` against ``problem``.

    Returns a list of failure descriptions; empty means everything checks.
    """
    errs: list[str] = []
    c = doc.certificates
    sysm = problem.system
    try:
        if doc.command == "verify":
            if isinstance(problem.set, Polyhedron):
                if doc.invariant and not ContinuousCertificate(_as_matrix(c["H"])).is_valid(sysm, problem.set):
                    errs.append("H does not satisfy the continuous invariance conditions")
            else:
                errs += _check_cone(c.get("tangent_cone", []), sysm, problem.set, doc.invariant)
        elif doc.method in ("taylor", "polynomial"):
            errs += _check_taylor(doc, problem)
        elif doc.method == "rational":
            errs += _check_rational(doc, problem)
        elif doc.method == "euler":
            errs += _check_euler(doc, problem)
        else:
            errs.append(f"unknown method {doc.method!r}")
    except (KeyError, TypeError, ValueError) as exc:
        errs.append(f"malformed certificate: {exc!r}")
    return errs


def _check_H_gamma(c: dict, problem: Problem) -> tuple[list[str], Matrix, Optional[Fraction]]:
    errs = []
    H = _as_matrix(c["H"])
    if not ContinuousCertificate(H).is_valid(problem.system, problem.set):
        errs.append("H does not satisfy the continuous invariance conditions")
    gamma = None if c["gamma"] == "unbounded" else c["gamma"]
    shift = gamma if gamma is not None and gamma > 0 else Fraction(0)
    if not is_nonnegative(H.add_identity(shift)):
        errs.append("H + gamma I has a negative entry")
    return errs, H, gamma


def _discrete_ok(H_tilde: Matrix, A_d: Matrix, P: Polyhedron) -> bool:
    return DiscreteCertificate(H_tilde, A_d).is_valid(P)


def _check_taylor(doc: ResultDocument, problem: Problem) -> list[str]:
    c = doc.certificates
    errs, H, gamma = _check_H_gamma(c, problem)
    scheme = PolynomialScheme(tuple(c["sigmas"]))
    if scheme != problem.scheme.polynomial:
        errs.append("sigmas differ from the problem's scheme")
    if gamma is None or gamma <= 0:
        if doc.threshold is not None:
            errs.append("nonpositive gamma must give an infinite threshold")
        return errs
    polys = [Polynomial(p) for p in c["f_polys"]]
    if polys != f_coefficient_polys(scheme, gamma):
        errs.append("f_i polynomials do not match the expansion for this gamma")
    total = Polynomial([])
    for i, f in enumerate(polys):
        total = total + f * gamma ** i
    if total != Polynomial([1]):
        errs.append("sum gamma^i f_i is not identically 1")
    if doc.threshold is not None:
        for dt in (doc.threshold / 2, doc.threshold):
            if any(f(dt) < 0 for f in polys):
                errs.append(f"some f_i is negative at dt = {dt}")
            Ht = discrete_H_matrix(H, scheme, dt)
            Ad = discrete_matrix(problem.system, scheme, dt)
            if not _discrete_ok(Ht, Ad, problem.set):
                errs.append(f"predicted discrete certificate fails at dt = {dt}")
    return errs


def _check_rational(doc: ResultDocument, problem: Problem) -> list[str]:
    c = doc.certificates
    errs, H, gamma = _check_H_gamma(c, problem)
    r = RationalFunction(Polynomial(c["numerator"]), Polynomial(c["denominator"]))
    if gamma is None or gamma <= 0:
        if doc.threshold is not None:
            errs.append("nonpositive gamma must give an infinite threshold")
        return errs
    rho = c["rho"]
    if rho == INFINITY:
        if doc.threshold is not None:
            errs.append("infinite rho must give an infinite threshold")
        return errs
    if doc.threshold != rho / gamma:
        errs.append("threshold differs from rho / gamma")
    rn = r.normalized()
    for i in range(c["checked_order"] + 1):
        if derivative_numerator(rn, i)(-rho) < 0:
            errs.append(f"derivative of order {i} is negative at -rho")
    if rn.h(-rho) <= 0:
        errs.append("denominator is not positive at -rho")
    tau = doc.threshold
    for dt in (tau / 2, tau):
        Ht = eval_matrix(r, H.scale(dt))
        Ad = eval_matrix(r, problem.system.A.scale(dt))
        if not _discrete_ok(Ht, Ad, problem.set):
            errs.append(f"r(H dt) is not a discrete certificate at dt = {dt}")
    return errs


def _check_cone(entries: list, system: LinearSystem, P: Polytope, invariant: Optional[bool]) -> list[str]:
    errs = []
    for e in entries:
        if not e["member"]:
            if invariant:
                errs.append(f"vertex {e['vertex']} fails but the set is reported invariant")
            continue
        errs += _check_vertex_combo(e, system, P)
    return errs


def _check_vertex_combo(e: dict, system: LinearSystem, P: Polytope) -> list[str]:
    i = e["vertex"]
    g = e["gammas"]
    xi = P.vertices[i]
    y = system.A.apply(xi)
    if any(v < 0 for v in g):
        return [f"negative multiplier at vertex {i}"]
    combo = tuple(sum((g[j] * (P.vertices[j][d] - xi[d]) for j in range(len(P)) if j != i), Fraction(0))
                  for d in range(P.dim))
    if combo != y:
        return [f"multipliers at vertex {i} do not reproduce A x_{i}"]
    return []


def _check_euler(doc: ResultDocument, problem: Problem) -> list[str]:
    P = problem.set
    errs = []
    eps_values = []
    for e in doc.certificates["per_vertex"]:
        errs += _check_vertex_combo(e, problem.system, P)
        total = sum(e["gammas"], Fraction(0))
        if e["epsilon"] == INFINITY:
            if total != 0:
                errs.append(f"vertex {e['vertex']} reported infinite with nonzero multipliers")
        else:
            if total == 0 or e["epsilon"] != 1 / total:
                errs.append(f"epsilon at vertex {e['vertex']} is not 1 / sum of multipliers")
            eps_values.append(e["epsilon"])
    expect = min(eps_values) if eps_values else None
    if doc.threshold != expect:
        errs.append("threshold is not the minimum per-vertex epsilon")
    return errs
