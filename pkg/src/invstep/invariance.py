"""Invariance conditions for polyhedra ``{x : G x <= b}``.

A polyhedron is invariant for ``x' = A x`` iff some ``H`` with nonnegative
off-diagonal entries satisfies ``H G = G A`` and ``H b <= 0``; it is invariant
for ``x+ = A_d x`` iff some entrywise nonnegative ``H~`` satisfies
``H~ G = G A_d`` and ``H~ b <= b``.

The constraints on the unknown matrix never couple two of its rows, so every
question here is answered by ``m`` independent small linear programs (one
per row) instead of one program over all ``m**2`` entries.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import lp
from .exceptions import DimensionError, NotInvariantError
from .linalg import (Matrix, ScalarLike, Vector, as_fraction, as_vector, dot,
                     is_nonnegative, is_offdiag_nonnegative)

__all__ = [
    "Polyhedron",
    "LinearSystem",
    "ContinuousCertificate",
    "DiscreteCertificate",
    "GammaResult",
    "verify_continuous",
    "verify_discrete",
    "min_gamma",
    "euler_map_inclusion",
]


@dataclass(frozen=True)
class Polyhedron:
    G: Matrix
    b: Vector

    def __post_init__(self):
        G = self.G if isinstance(self.G, Matrix) else Matrix(self.G)
        b = as_vector(self.b)
        if len(b) != G.rows:
            raise DimensionError(f"G has {G.rows} rows but b has length {len(b)}")
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "b", b)

    @classmethod
    def box(cls, lower: Iterable[ScalarLike], upper: Iterable[ScalarLike]) -> "Polyhedron":
        """``lower <= x <= upper`` with rows ``x_i <= u_i`` first, then ``-x_i <= -l_i``."""
        lo, hi = as_vector(lower), as_vector(upper)
        n = len(lo)
        eye = Matrix.identity(n)
        G = Matrix(eye.tolist() + (-eye).tolist())
        return cls(G, hi + tuple(-x for x in lo))

    @property
    def dim(self) -> int:
        return self.G.cols

    @property
    def num_constraints(self) -> int:
        return self.G.rows

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(v <= bi for v, bi in zip(self.G.apply(x), self.b))


@dataclass(frozen=True)
class LinearSystem:
    """The continuous system ``x' = A x``."""

    A: Matrix

    def __post_init__(self):
        A = self.A if isinstance(self.A, Matrix) else Matrix(self.A)
        if not A.is_square:
            raise DimensionError("system matrix must be square")
        object.__setattr__(self, "A", A)

    @property
    def dim(self) -> int:
        return self.A.rows


def _check_dims(A: Matrix, P: Polyhedron) -> None:
    if not A.is_square or A.rows != P.dim:
        raise DimensionError(f"system matrix {A.shape} does not act on R^{P.dim}")


@dataclass(frozen=True)
class ContinuousCertificate:
    H: Matrix

    def is_valid(self, system: LinearSystem, P: Polyhedron) -> bool:
        H = self.H
        return (H.shape == (P.num_constraints,) * 2
                and is_offdiag_nonnegative(H)
                and H @ P.G == P.G @ system.A
                and all(v <= 0 for v in H.apply(P.b)))


@dataclass(frozen=True)
class DiscreteCertificate:
    H: Matrix
    A_d: Matrix

    def is_valid(self, P: Polyhedron) -> bool:
        H = self.H
        return (H.shape == (P.num_constraints,) * 2
                and is_nonnegative(H)
                and H @ P.G == P.G @ self.A_d
                and all(v <= bi for v, bi in zip(H.apply(P.b), P.b)))


@dataclass(frozen=True)
class GammaResult:
    """Optimum of ``min gamma`` s.t. ``H + gamma I >= 0, H G = G A, H b <= 0``.

    ``gamma_star`` is ``None`` exactly when the program is unbounded below;
    ``H`` then satisfies the constraints with ``gamma = 0``.
    """

    gamma_star: Optional[Fraction]
    H: Matrix

    @property
    def unbounded(self) -> bool:
        return self.gamma_star is None

    @property
    def nonpositive(self) -> bool:
        return self.gamma_star is None or self.gamma_star <= 0

    @property
    def gamma_for_check(self) -> Fraction:
        return Fraction(0) if self.gamma_star is None else self.gamma_star

    def is_valid(self, system: LinearSystem, P: Polyhedron) -> bool:
        H = self.H
        return (ContinuousCertificate(H).is_valid(system, P)
                and is_nonnegative(H.add_identity(self.gamma_for_check)))


def _row_program(P: Polyhedron, target: Vector, i: int, bound: Fraction, *,
                 diag_free: bool, objective: Optional[Vector] = None,
                 diag_floor: Optional[Fraction] = None) -> lp.LinearProgram:
    """LP over row ``h`` of the unknown matrix: ``h G = target``, ``h . b <= bound``."""
    m, n = P.num_constraints, P.dim
    G = P.G
    eq = [[G[j, k] for j in range(m)] for k in range(n)]
    ineq = [list(P.b)]
    rhs = [bound]
    if diag_floor is not None:
        row = [Fraction(0)] * m
        row[i] = Fraction(-1)
        ineq.append(row)
        rhs.append(-diag_floor)
    mask = [True] * m
    if diag_free:
        mask[i] = False
    return lp.LinearProgram(objective or (Fraction(0),) * m, eq, target, ineq, rhs, mask)


def _assemble(rows: list[Vector]) -> Matrix:
    return Matrix(rows)


def verify_continuous(system: LinearSystem, P: Polyhedron) -> Optional[ContinuousCertificate]:
    """Exact ``H`` certifying continuous invariance, or ``None`` if none exists."""
    _check_dims(system.A, P)
    GA = P.G @ system.A
    rows = []
    for i in range(P.num_constraints):
        out = lp.feasibility(_row_program(P, GA.row(i), i, Fraction(0), diag_free=True))
        if not out.is_optimal:
            return None
        rows.append(out.solution)
    cert = ContinuousCertificate(_assemble(rows))
    assert cert.is_valid(system, P), "continuous certificate failed re-validation"
    return cert


def verify_discrete(A_d: Matrix, P: Polyhedron) -> Optional[DiscreteCertificate]:
    """Exact nonnegative ``H~`` certifying ``A_d P subset P``, or ``None``."""
    _check_dims(A_d, P)
    GA = P.G @ A_d
    rows = []
    for i in range(P.num_constraints):
        out = lp.feasibility(_row_program(P, GA.row(i), i, P.b[i], diag_free=False))
        if not out.is_optimal:
            return None
        rows.append(out.solution)
    cert = DiscreteCertificate(_assemble(rows), A_d)
    assert cert.is_valid(P), "discrete certificate failed re-validation"
    return cert


def min_gamma(system: LinearSystem, P: Polyhedron) -> GammaResult:
    """Smallest diagonal shift over all continuous invariance certificates.

    ``H + gamma I >= 0`` only bounds the diagonal, so the optimum is
    ``max_i (-max h_ii)`` where row ``i`` maximizes its diagonal entry subject
    to its own constraints.

    Raises :class:`NotInvariantError` if ``P`` is not invariant.
    """
    _check_dims(system.A, P)
    m = P.num_constraints
    GA = P.G @ system.A
    rows: list[Optional[Vector]] = []
    gamma: Optional[Fraction] = None
    for i in range(m):
        c = [Fraction(0)] * m
        c[i] = Fraction(-1)
        out = lp.solve(_row_program(P, GA.row(i), i, Fraction(0), diag_free=True, objective=c))
        if out.status == lp.INFEASIBLE:
            raise NotInvariantError(f"no invariance certificate: row {i} of H is infeasible")
        if out.status == lp.UNBOUNDED:
            rows.append(None)
            continue
        rows.append(out.solution)
        g = -out.solution[i]
        gamma = g if gamma is None else max(gamma, g)
    floor = Fraction(0) if gamma is None else -gamma
    for i in range(m):
        if rows[i] is None:
            out = lp.feasibility(_row_program(P, GA.row(i), i, Fraction(0), diag_free=True,
                                              diag_floor=floor))
            assert out.is_optimal, "unbounded row lost feasibility"
            rows[i] = out.solution
    res = GammaResult(gamma, _assemble(rows))  # type: ignore[arg-type]
    assert res.is_valid(system, P), "gamma certificate failed re-validation"
    return res


def euler_map_inclusion(system: LinearSystem, P: Polyhedron, gamma: ScalarLike) -> bool:
    """Whether ``(I + A / gamma) P`` is contained in ``P``."""
    gamma = as_fraction(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    _check_dims(system.A, P)
    step = system.A.scale(1 / gamma).add_identity(1)
    return verify_discrete(step, P) is not None
