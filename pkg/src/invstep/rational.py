"""Rational discretization maps ``x+ = r(A dt) x`` with ``r = g / h``.

The threshold is ``rho / gamma`` where ``rho`` is the radius of absolute
monotonicity of ``r``: the largest ``kappa`` with every derivative of ``r``
nonnegative on ``[-kappa, 0]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .exceptions import NoPositiveThresholdError
from .invariance import LinearSystem, Polyhedron, min_gamma
from .linalg import Matrix, ScalarLike, as_fraction
from .poly import (DEFAULT_EPS, FirstZeroResult, Polynomial, derivative, first_positive_zero,
                   first_sign_crossing)
from .taylor import ThresholdResult

__all__ = [
    "RationalFunction",
    "RhoResult",
    "RationalThresholdReport",
    "eval_matrix",
    "derivative_numerator",
    "default_max_order",
    "radius_abs_monotonicity",
    "rational_threshold",
]

POLE = "pole"


@dataclass(frozen=True)
class RationalFunction:
    g: Polynomial
    h: Polynomial = field(default_factory=lambda: Polynomial([1]))

    def __post_init__(self):
        g = self.g if isinstance(self.g, Polynomial) else Polynomial(self.g)
        h = self.h if isinstance(self.h, Polynomial) else Polynomial(self.h)
        if h.is_zero:
            raise ValueError("denominator is identically zero")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "h", h)

    @classmethod
    def taylor(cls, p: int) -> "RationalFunction":
        return cls(Polynomial([Fraction(1, math.factorial(i)) for i in range(p + 1)]))

    @classmethod
    def backward_euler(cls) -> "RationalFunction":
        return cls(Polynomial([1]), Polynomial([1, -1]))

    @classmethod
    def trapezoidal(cls) -> "RationalFunction":
        return cls(Polynomial([1, Fraction(1, 2)]), Polynomial([1, Fraction(-1, 2)]))

    def __call__(self, t: ScalarLike) -> Fraction:
        return self.g(t) / self.h(t)

    @property
    def value_at_zero(self) -> Fraction:
        return self(0)

    def normalized(self) -> "RationalFunction":
        """Same function with ``h(0) > 0``."""
        if self.h(0) < 0:
            return RationalFunction(-self.g, -self.h)
        return self


def _poly_of_matrix(p: Polynomial, M: Matrix) -> Matrix:
    acc = Matrix.zeros(M.rows)
    for c in reversed(p.coeffs):
        acc = (acc @ M).add_identity(c)
    return acc


def eval_matrix(r: RationalFunction, M: Matrix) -> Matrix:
    """``h(M)^{-1} g(M)``; raises :class:`SingularMatrixError` if ``h(M)`` is singular."""
    return _poly_of_matrix(r.h, M).solve(_poly_of_matrix(r.g, M))


def derivative_numerator(r: RationalFunction, i: int) -> Polynomial:
    """``N_i`` with ``r^(i) = N_i / h^(i+1)``.

    ``N_0 = g`` and ``N_{i+1} = N_i' h - (i+1) N_i h'``.
    """
    if i < 0:
        raise ValueError("derivative order must be nonnegative")
    N = r.g
    dh = derivative(r.h)
    for k in range(i):
        N = derivative(N) * r.h - dh * N * (k + 1)
    return N


def default_max_order(r: RationalFunction) -> int:
    return 2 * (max(r.g.degree, 0) + max(r.h.degree, 0)) + 2


@dataclass(frozen=True)
class RhoResult:
    """Radius of absolute monotonicity, ``rho is None`` meaning infinite.

    ``per_order_constraints`` lists ``(order, search result)`` for every
    checked order; the search result locates the first point ``s > 0`` where
    ``N_order(-s)`` turns negative.  ``binding_order`` is the order that
    determined ``rho`` (``"pole"`` if the nearest negative pole of ``r`` did).
    ``exhaustive`` is true when all orders above ``checked_order`` vanish
    identically, so the result covers every derivative.
    """

    rho: Optional[Fraction]
    checked_order: int
    per_order_constraints: list
    binding_order: object = None
    pole: Optional[FirstZeroResult] = None
    exhaustive: bool = False

    @property
    def kind(self) -> str:
        return "infinite" if self.rho is None else "finite"


def radius_abs_monotonicity(r: RationalFunction, max_order: Optional[int] = None,
                            eps: ScalarLike = DEFAULT_EPS) -> RhoResult:
    """Radius of absolute monotonicity checked through ``max_order`` derivatives.

    Orders ``0..max_order`` are all constrained (order 0 included).  Each
    constraint is the first sign crossing of ``N_i(-s)`` for ``s > 0``, since
    ``h > 0`` on the admissible interval makes the sign of ``r^(i)`` that of
    ``N_i``.  The nearest negative zero of ``h`` caps ``rho`` strictly from
    below.
    """
    if r.value_at_zero != 1:
        raise ValueError("absolute monotonicity threshold needs r(0) = 1")
    r = r.normalized()
    min_order = max(r.g.degree, 0) + max(r.h.degree, 0) + 2
    N_max = default_max_order(r) if max_order is None else max_order
    if N_max < min_order:
        raise ValueError(f"max_order must be at least deg g + deg h + 2 = {min_order}")
    eps = as_fraction(eps)

    constraints = []
    rho: Optional[Fraction] = None
    binding = None
    for i in range(N_max + 1):
        q = derivative_numerator(r, i).mirror()
        if q.is_zero:
            constraints.append((i, FirstZeroResult.none()))
            continue
        q = q.shift_down(q.low_order())
        if q.coeffs[0] < 0:
            raise NoPositiveThresholdError(
                f"derivative of order {i} is negative just left of 0; r is not absolutely monotonic at 0")
        res = first_sign_crossing(q, eps)
        constraints.append((i, res))
        if res.found and (rho is None or res.safe_value < rho):
            rho, binding = res.safe_value, i

    pole = None
    hq = r.h.mirror()
    if hq.degree >= 1:
        pole = first_positive_zero(hq, eps)
        if pole.found:
            # strictly below the pole; a bracket's left end is already a non-root
            cap = pole.lo if pole.kind == FirstZeroResult.BRACKET else max(pole.value - eps, pole.value / 2)
            if rho is None or cap < rho:
                rho, binding = cap, POLE

    exhaustive = r.h.degree == 0 and N_max >= r.g.degree
    return RhoResult(rho, N_max, constraints, binding, pole, exhaustive)


@dataclass(frozen=True)
class RationalThresholdReport:
    tau: ThresholdResult
    gamma: Optional[Fraction]
    rho: Optional[RhoResult] = None
    H: Optional[Matrix] = None


def rational_threshold(system: LinearSystem, P: Polyhedron, r: RationalFunction,
                       max_order: Optional[int] = None, eps: ScalarLike = DEFAULT_EPS
                       ) -> RationalThresholdReport:
    """``tau = rho / gamma*``, infinite when ``gamma* <= 0`` or ``rho`` is infinite."""
    if r.value_at_zero != 1:
        raise ValueError("rational discretization needs r(0) = 1")
    res = min_gamma(system, P)
    if res.nonpositive:
        return RationalThresholdReport(
            ThresholdResult.infinite("nonpositive gamma: H >= 0 certificate exists"),
            res.gamma_star, H=res.H)
    rho = radius_abs_monotonicity(r, max_order, eps)
    if rho.rho is None:
        tau = ThresholdResult.infinite(f"r absolutely monotonic on (-oo, 0] through order {rho.checked_order}")
    else:
        tau = ThresholdResult(rho.rho / res.gamma_star, "radius of absolute monotonicity over gamma")
    return RationalThresholdReport(tau, res.gamma_star, rho, res.H)
