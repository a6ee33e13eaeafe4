"""Largest forward-Euler steplength on a polytope given by its vertices.

At vertex ``x_i`` the velocity ``A x_i`` must lie in the cone spanned by the
edges ``x_j - x_i``.  Writing ``A x_i = sum_j g_j (x_j - x_i)`` with minimal
``sum g_j`` gives the longest admissible step ``eps_i = 1 / sum g_j`` from that
vertex, and the threshold is ``min_i eps_i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import lp
from .exceptions import DimensionError, NotInvariantError
from .invariance import LinearSystem
from .linalg import ScalarLike, Vector, as_vector
from .taylor import ThresholdResult

__all__ = [
    "Polytope",
    "VertexEpsilon",
    "EulerThresholdReport",
    "tangent_cone_member",
    "vertex_epsilon",
    "vertex_epsilon_alt",
    "euler_threshold",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Polytope:
    """``conv{vertices}``.  Supplying true vertices is the caller's job."""

    vertices: tuple

    def __post_init__(self):
        vs = tuple(as_vector(v) for v in self.vertices)
        if not vs:
            raise DimensionError("a polytope needs at least one vertex")
        n = len(vs[0])
        if n == 0 or any(len(v) != n for v in vs):
            raise DimensionError("vertices must share a positive dimension")
        object.__setattr__(self, "vertices", vs)

    @classmethod
    def box(cls, lower: Iterable[ScalarLike], upper: Iterable[ScalarLike]) -> "Polytope":
        lo, hi = as_vector(lower), as_vector(upper)
        pts = [()]
        for a, b in zip(lo, hi):
            pts = [p + (c,) for p in pts for c in (a, b)]
        return cls(tuple(pts))

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def __len__(self) -> int:
        return len(self.vertices)

    def contains(self, x: Sequence[ScalarLike]) -> bool:
        """Membership by the LP ``sum l_j x_j = x, sum l_j = 1, l >= 0``."""
        x = as_vector(x)
        if len(x) != self.dim:
            raise DimensionError("point has the wrong dimension")
        k = len(self.vertices)
        eq = [[v[d] for v in self.vertices] for d in range(self.dim)] + [[_ONE] * k]
        out = lp.feasibility(lp.LinearProgram((_ZERO,) * k, eq, x + (_ONE,)))
        return out.is_optimal


@dataclass(frozen=True)
class VertexEpsilon:
    """Per-vertex step bound; ``epsilon is None`` means unbounded (``A x_i = 0``)."""

    vertex_index: int
    epsilon: Optional[Fraction]
    gammas: tuple = ()

    @property
    def is_infinite(self) -> bool:
        return self.epsilon is None


@dataclass(frozen=True)
class EulerThresholdReport:
    tau: ThresholdResult
    per_vertex: list = field(default_factory=list)


def _edge_matrix_rows(P: Polytope, i: int) -> tuple[list[int], list[list[Fraction]]]:
    xi = P.vertices[i]
    others = [j for j in range(len(P)) if j != i]
    rows = [[P.vertices[j][d] - xi[d] for j in others] for d in range(P.dim)]
    return others, rows


def _velocity(system: LinearSystem, P: Polytope, i: int) -> Vector:
    if not 0 <= i < len(P):
        raise IndexError(f"vertex index {i} out of range")
    if system.dim != P.dim:
        raise DimensionError(f"system of dimension {system.dim} on polytope of dimension {P.dim}")
    return system.A.apply(P.vertices[i])


def tangent_cone_member(P: Polytope, i: int, y: Sequence[ScalarLike]) -> bool:
    """Whether ``y`` is a nonnegative combination of the edges ``x_j - x_i``."""
    if not 0 <= i < len(P):
        raise IndexError(f"vertex index {i} out of range")
    y = as_vector(y)
    if len(y) != P.dim:
        raise DimensionError("direction has the wrong dimension")
    others, rows = _edge_matrix_rows(P, i)
    if not others:
        return all(v == 0 for v in y)
    out = lp.feasibility(lp.LinearProgram((_ZERO,) * len(others), rows, y))
    return out.is_optimal


def vertex_epsilon(system: LinearSystem, P: Polytope, i: int) -> VertexEpsilon:
    """``min sum g_j`` s.t. ``sum g_j (x_j - x_i) = A x_i``, ``g >= 0``."""
    y = _velocity(system, P, i)
    others, rows = _edge_matrix_rows(P, i)
    if all(v == 0 for v in y):
        return VertexEpsilon(i, None, (_ZERO,) * len(P))
    if not others:
        raise NotInvariantError(f"single point moves under the flow (vertex {i})")
    out = lp.solve(lp.LinearProgram((_ONE,) * len(others), rows, y))
    if out.status != lp.OPTIMAL:
        raise NotInvariantError(f"A x_{i} is not in the tangent cone at vertex {i}")
    gammas = [_ZERO] * len(P)
    for j, g in zip(others, out.solution):
        gammas[j] = g
    total = out.objective_value
    return VertexEpsilon(i, None if total == 0 else 1 / total, tuple(gammas))


def vertex_epsilon_alt(system: LinearSystem, P: Polytope, i: int) -> VertexEpsilon:
    """``max tau`` s.t. ``sum u_j x_j = x_i + tau A x_i``, ``sum u_j = 1``, ``u >= 0``.

    The multipliers reported are ``u_j / tau`` for ``j != i``.
    """
    y = _velocity(system, P, i)
    xi = P.vertices[i]
    k = len(P)
    # variables: u_0..u_{k-1}, tau
    eq = [[v[d] for v in P.vertices] + [-y[d]] for d in range(P.dim)]
    eq.append([_ONE] * k + [_ZERO])
    rhs = xi + (_ONE,)
    c = (_ZERO,) * k + (-_ONE,)
    out = lp.solve(lp.LinearProgram(c, eq, rhs))
    if out.status == lp.UNBOUNDED:
        return VertexEpsilon(i, None, (_ZERO,) * k)
    assert out.status == lp.OPTIMAL, "u = e_i, tau = 0 is always feasible"
    tau = out.solution[-1]
    if tau == 0:
        raise NotInvariantError(f"A x_{i} is not in the tangent cone at vertex {i}")
    gammas = tuple(_ZERO if j == i else out.solution[j] / tau for j in range(k))
    return VertexEpsilon(i, tau, gammas)


def euler_threshold(system: LinearSystem, P: Polytope) -> EulerThresholdReport:
    """The largest forward-Euler steplength threshold, ``min_i eps_i``."""
    per = [vertex_epsilon(system, P, i) for i in range(len(P))]
    finite = [v.epsilon for v in per if v.epsilon is not None]
    if not finite:
        return EulerThresholdReport(ThresholdResult.infinite("A x_i = 0 at every vertex"), per)
    return EulerThresholdReport(ThresholdResult(min(finite), "minimum per-vertex Euler step"), per)
