"""Polynomial (Taylor-type) discretizations ``A_d = sum sigma_i (A dt)^i``.

With ``H^ = H + gamma I >= 0`` the discrete certificate
``H~(dt) = sum sigma_i H^i dt^i`` expands as ``sum f_i(dt) H^^i``; the
threshold is the first point where some ``f_i`` turns negative.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exceptions import NoPositiveThresholdError
from .invariance import (ContinuousCertificate, GammaResult, LinearSystem, Polyhedron,
                         min_gamma)
from .linalg import Matrix, ScalarLike, as_fraction, as_vector, min_diagonal_shift
from .poly import (DEFAULT_EPS, FirstZeroResult, Polynomial, first_positive_zero,
                   first_sign_crossing)

__all__ = [
    "PolynomialScheme",
    "ThresholdResult",
    "TaylorThresholdReport",
    "discrete_matrix",
    "discrete_H_matrix",
    "f_coefficient_polys",
    "threshold_for_gamma",
    "taylor_threshold",
]


@dataclass(frozen=True)
class ThresholdResult:
    """A steplength threshold; ``value is None`` encodes +infinity."""

    value: Optional[Fraction]
    note: str = ""

    def __post_init__(self):
        if self.value is not None and self.value <= 0:
            raise ValueError("a finite threshold must be positive")

    @classmethod
    def infinite(cls, note: str = "") -> "ThresholdResult":
        return cls(None, note)

    @property
    def kind(self) -> str:
        return "infinite" if self.value is None else "finite"

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __str__(self) -> str:
        return "infinity" if self.value is None else str(self.value)


@dataclass(frozen=True)
class PolynomialScheme:
    """``A_d = sum_i sigmas[i] * A^i * dt^i`` with ``sigmas[0] == 1``."""

    sigmas: tuple

    def __post_init__(self):
        s = as_vector(self.sigmas)
        if not s or s[0] != 1:
            raise ValueError("sigma_0 must be 1 so that dt = 0 gives the identity map")
        object.__setattr__(self, "sigmas", s)

    @classmethod
    def taylor(cls, p: int) -> "PolynomialScheme":
        if p < 0:
            raise ValueError("order must be nonnegative")
        return cls(tuple(Fraction(1, math.factorial(i)) for i in range(p + 1)))

    @property
    def order(self) -> int:
        return len(self.sigmas) - 1

    @property
    def nonnegative(self) -> bool:
        return all(s >= 0 for s in self.sigmas)

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.sigmas)


def _matrix_polynomial(M: Matrix, sigmas: Sequence[Fraction], dt: Fraction) -> Matrix:
    # Horner in (M dt)
    Mdt = M.scale(dt)
    acc = Matrix.zeros(M.rows)
    for s in reversed(sigmas):
        acc = (acc @ Mdt).add_identity(s)
    return acc


def discrete_matrix(system: LinearSystem, scheme: PolynomialScheme, dt: ScalarLike) -> Matrix:
    dt = as_fraction(dt)
    if dt < 0:
        raise ValueError("steplength must be nonnegative")
    return _matrix_polynomial(system.A, scheme.sigmas, dt)


def discrete_H_matrix(H: Matrix, scheme: PolynomialScheme, dt: ScalarLike) -> Matrix:
    """The discrete certificate ``sum sigma_i H^i dt^i`` predicted from ``H``."""
    return _matrix_polynomial(H, scheme.sigmas, as_fraction(dt))


def f_coefficient_polys(scheme: PolynomialScheme, gamma: ScalarLike) -> list[Polynomial]:
    """``f_i(dt) = sum_{k=i}^p (-1)^(k-i) sigma_k C(k, i) gamma^(k-i) dt^k``."""
    gamma = as_fraction(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    p = scheme.order
    out = []
    for i in range(p + 1):
        coeffs = [Fraction(0)] * (p + 1)
        for k in range(i, p + 1):
            coeffs[k] = (-1) ** (k - i) * scheme.sigmas[k] * math.comb(k, i) * gamma ** (k - i)
        out.append(Polynomial(coeffs))
    return out


def _stripped(f: Polynomial, i: int) -> Optional[Polynomial]:
    """``f / t^k`` with ``k`` the order of vanishing at 0; ``None`` if ``f == 0``.

    Raises if ``f`` is negative immediately to the right of 0.
    """
    if f.is_zero:
        return None
    g = f.shift_down(f.low_order())
    if g.coeffs[0] < 0:
        raise NoPositiveThresholdError(f"f_{i} is negative just right of 0; no positive threshold")
    return g


@dataclass(frozen=True)
class TaylorThresholdReport:
    tau: ThresholdResult
    gamma: Optional[Fraction]
    f_polys: list = field(default_factory=list)
    per_poly_zeros: list = field(default_factory=list)
    literal_zeros: list = field(default_factory=list)
    H: Optional[Matrix] = None
    scheme: Optional[PolynomialScheme] = None


def threshold_for_gamma(scheme: PolynomialScheme, gamma: ScalarLike,
                        eps: ScalarLike = DEFAULT_EPS) -> TaylorThresholdReport:
    """Threshold implied by a fixed shift ``gamma > 0`` (no system needed)."""
    if not scheme.nonnegative:
        raise ValueError("threshold computation needs all sigma_i >= 0")
    gamma = as_fraction(gamma)
    polys = f_coefficient_polys(scheme, gamma)
    crossings: list[FirstZeroResult] = []
    literal: list[FirstZeroResult] = []
    best: Optional[Fraction] = None
    for i, f in enumerate(polys):
        g = _stripped(f, i)
        if g is None:
            crossings.append(FirstZeroResult.none())
            literal.append(FirstZeroResult.none())
            continue
        c = first_sign_crossing(g, eps)
        crossings.append(c)
        literal.append(first_positive_zero(g, eps))
        if c.found:
            v = c.safe_value
            best = v if best is None else min(best, v)
    if best is None:
        tau = ThresholdResult.infinite("no f_i changes sign on (0, oo)")
    else:
        tau = ThresholdResult(best, "first sign crossing of the f_i polynomials")
    return TaylorThresholdReport(tau, gamma, polys, crossings, literal, scheme=scheme)


def taylor_threshold(system: LinearSystem, P: Polyhedron, scheme: PolynomialScheme,
                     eps: ScalarLike = DEFAULT_EPS, *, H: Optional[Matrix] = None
                     ) -> TaylorThresholdReport:
    """Valid steplength threshold for the scheme on ``P``.

    ``gamma`` is the LP optimum from :func:`min_gamma`.  If an explicit
    continuous certificate ``H`` is passed, its own shift
    ``max(0, -min h_ii)`` is used instead.
    """
    if not scheme.nonnegative:
        raise ValueError("threshold computation needs all sigma_i >= 0")
    if H is not None:
        if not ContinuousCertificate(H).is_valid(system, P):
            raise ValueError("supplied H is not a continuous invariance certificate")
        gamma: Optional[Fraction] = min_diagonal_shift(H)
        note = "diagonal shift of the supplied certificate"
    else:
        res: GammaResult = min_gamma(system, P)
        gamma, H = res.gamma_star, res.H
        note = "LP-minimal diagonal shift"
    if gamma is None or gamma <= 0:
        return TaylorThresholdReport(
            ThresholdResult.infinite(f"nonpositive gamma ({note}): H >= 0 certificate exists"),
            gamma, H=H, scheme=scheme)
    rep = threshold_for_gamma(scheme, gamma, eps)
    return TaylorThresholdReport(rep.tau, gamma, rep.f_polys, rep.per_poly_zeros,
                                 rep.literal_zeros, H=H, scheme=scheme)
