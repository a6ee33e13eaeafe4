"""Univariate polynomials over the rationals, Sturm chains and zero search.

Coefficients are stored lowest degree first.  All routines are exact; the
only approximation anywhere is the final bracket width of a bisection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .linalg import ScalarLike, as_fraction

__all__ = [
    "Polynomial",
    "SturmChain",
    "FirstZeroResult",
    "DEFAULT_EPS",
    "derivative",
    "poly_rem",
    "poly_gcd",
    "sturm_chain",
    "count_sign_changes",
    "sign_changes",
    "count_zeros",
    "no_zero_bound",
    "cauchy_bound",
    "first_positive_zero",
    "square_free",
    "first_sign_crossing",
    "isolate_positive_roots",
]

DEFAULT_EPS = Fraction(1, 2**40)

_ZERO = Fraction(0)


class Polynomial:
    """Immutable polynomial ``sum(coeffs[i] * t**i)``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[ScalarLike] = ()):
        c = [as_fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def _raw(cls, coeffs: Sequence[Fraction]) -> "Polynomial":
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        obj = cls.__new__(cls)
        object.__setattr__(obj, "coeffs", tuple(c))
        return obj

    @classmethod
    def monomial(cls, k: int, c: ScalarLike = 1) -> "Polynomial":
        return cls._raw([_ZERO] * k + [as_fraction(c)])

    @classmethod
    def from_roots(cls, roots: Iterable[ScalarLike], lead: ScalarLike = 1) -> "Polynomial":
        p = cls._raw([as_fraction(lead)])
        for r in roots:
            p = p * cls._raw([-as_fraction(r), Fraction(1)])
        return p

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __call__(self, t: ScalarLike) -> Fraction:
        t = as_fraction(t)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Polynomial._raw([(a[i] if i < len(a) else _ZERO) + (b[i] if i < len(b) else _ZERO)
                                for i in range(n)])

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw([-c for c in self.coeffs])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = as_fraction(other)
            return Polynomial._raw([c * x for x in self.coeffs])
        if self.is_zero or other.is_zero:
            return Polynomial._raw([])
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial._raw([Fraction(1)])
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        db = other.degree
        lead = other.leading
        quot = [_ZERO] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1, db - 1, -1):
            q = rem[k] / lead
            if q:
                quot[k - db] = q
                for j, b in enumerate(other.coeffs):
                    rem[k - db + j] -= q * b
        return Polynomial._raw(quot), Polynomial._raw(rem[:db] if db > 0 else [])

    def mirror(self) -> "Polynomial":
        """``p(-t)``."""
        return Polynomial._raw([c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)])

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return self * (1 / self.leading)

    def low_order(self) -> int:
        """Multiplicity of the root at 0 (number of trailing zero coefficients)."""
        k = 0
        while k < len(self.coeffs) and self.coeffs[k] == 0:
            k += 1
        return k

    def shift_down(self, k: int) -> "Polynomial":
        """Divide exactly by ``t**k``; the low coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError(f"polynomial is not divisible by t^{k}")
        return Polynomial._raw(self.coeffs[k:])

    def compose_scale(self, s: ScalarLike) -> "Polynomial":
        """``p(s*t)``."""
        s = as_fraction(s)
        return Polynomial._raw([c * s**i for i, c in enumerate(self.coeffs)])


def derivative(f: Polynomial) -> Polynomial:
    return Polynomial._raw([i * c for i, c in enumerate(f.coeffs)][1:])


def poly_rem(a: Polynomial, b: Polynomial) -> Polynomial:
    return a.divmod(b)[1]


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor (zero only if both inputs are zero)."""
    while not b.is_zero:
        a, b = b, poly_rem(a, b)
    return a.monic()


@dataclass(frozen=True)
class SturmChain:
    sequence: tuple

    def __iter__(self):
        return iter(self.sequence)

    def __len__(self) -> int:
        return len(self.sequence)

    def __getitem__(self, i):
        return self.sequence[i]

    @property
    def degrees(self) -> list[int]:
        return [p.degree for p in self.sequence]


def sturm_chain(f: Polynomial) -> SturmChain:
    """``s0 = f``, ``s1 = f'``, ``s_k = -rem(s_{k-2}, s_{k-1})`` until the remainder vanishes."""
    if f.is_zero:
        raise ValueError("Sturm chain of the zero polynomial")
    seq = [f]
    nxt = derivative(f)
    while not nxt.is_zero:
        seq.append(nxt)
        nxt = -poly_rem(seq[-2], seq[-1])
    return SturmChain(tuple(seq))


def count_sign_changes(values: Iterable[Fraction]) -> int:
    """Sign changes in a sequence, zeros ignored."""
    changes = 0
    prev = 0
    for v in values:
        s = (v > 0) - (v < 0)
        if s == 0:
            continue
        if prev and s != prev:
            changes += 1
        prev = s
    return changes


def sign_changes(chain: SturmChain, at: ScalarLike) -> int:
    at = as_fraction(at)
    return count_sign_changes(p(at) for p in chain)


def _divide_out_root(f: Polynomial, r: Fraction) -> Polynomial:
    lin = Polynomial._raw([-r, Fraction(1)])
    while f.degree > 0 and f(r) == 0:
        f = f.divmod(lin)[0]
    return f


def count_zeros(f: Polynomial, lo: ScalarLike, hi: ScalarLike,
                chain: Optional[SturmChain] = None) -> int:
    """Distinct real zeros of ``f`` in the closed interval ``[lo, hi]``.

    Exact rational roots sitting on an endpoint are divided out and counted
    separately, so the Sturm count itself always sees nonzero endpoints.  A
    precomputed ``chain`` is only used when both endpoints are non-roots.
    """
    if f.is_zero:
        raise ValueError("zero polynomial has infinitely many zeros")
    lo, hi = as_fraction(lo), as_fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    extra = 0
    if f(lo) == 0:
        f = _divide_out_root(f, lo)
        extra += 1
        chain = None
    if hi != lo and f(hi) == 0:
        f = _divide_out_root(f, hi)
        extra += 1
        chain = None
    if lo == hi or f.degree <= 0:
        return extra
    if chain is None:
        chain = sturm_chain(f)
    return extra + abs(sign_changes(chain, lo) - sign_changes(chain, hi))


def _normalized(f: Polynomial) -> list[Fraction]:
    c0 = f.coeffs[0] if f.coeffs else _ZERO
    if c0 == 0:
        raise ValueError("polynomial vanishes at 0")
    return [c / c0 for c in f.coeffs]


def no_zero_bound(f: Polynomial) -> Fraction:
    """``t*`` beyond which ``f`` cannot vanish if it has no zero in ``[0, t*]``.

    ``f`` is scaled so that ``f(0) = 1``; with ``alpha`` the scaled
    coefficients, ``t* = max(1, |alpha_1|, ..., |alpha_{q-1}|) / alpha_q + 1``.
    """
    alpha = _normalized(f)
    if len(alpha) < 2 or alpha[-1] <= 0:
        raise ValueError("needs a non-constant polynomial with positive normalized leading coefficient")
    a_star = max([Fraction(1)] + [abs(a) for a in alpha[1:-1]])
    return a_star / alpha[-1] + 1


def cauchy_bound(f: Polynomial) -> Fraction:
    """``1 + max_i |a_i / a_q|``; every real root lies strictly inside it."""
    if f.degree < 1:
        raise ValueError("Cauchy bound of a constant")
    lead = abs(f.leading)
    return 1 + max(abs(c) / lead for c in f.coeffs[:-1])


@dataclass(frozen=True)
class FirstZeroResult:
    """Outcome of a first-zero search.

    ``kind`` is ``"none"`` (no positive zero), ``"exact"`` (``value`` is the
    zero) or ``"bracket"`` (the zero lies in ``(lo, hi]`` with ``hi - lo < eps``).
    """

    kind: str
    value: Optional[Fraction] = None
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None

    NONE = "none"
    EXACT = "exact"
    BRACKET = "bracket"

    @classmethod
    def none(cls) -> "FirstZeroResult":
        return cls(cls.NONE)

    @classmethod
    def exact(cls, v: Fraction) -> "FirstZeroResult":
        return cls(cls.EXACT, value=v, lo=v, hi=v)

    @classmethod
    def bracket(cls, lo: Fraction, hi: Fraction) -> "FirstZeroResult":
        return cls(cls.BRACKET, lo=lo, hi=hi)

    @property
    def found(self) -> bool:
        return self.kind != self.NONE

    @property
    def safe_value(self) -> Optional[Fraction]:
        """Largest certified point up to which the search guarantees no crossing."""
        return self.value if self.kind == self.EXACT else self.lo

    def __str__(self) -> str:
        if self.kind == self.NONE:
            return "none"
        if self.kind == self.EXACT:
            return str(self.value)
        return f"[{self.lo}, {self.hi}]"


def _check_positive_at_zero(f: Polynomial) -> None:
    if f.is_zero or f.coeffs[0] <= 0:
        raise ValueError("search requires f(0) > 0")


def first_positive_zero(f: Polynomial, eps: ScalarLike = DEFAULT_EPS) -> FirstZeroResult:
    """First positive zero of ``f`` (any multiplicity) by Sturm-guided bisection.

    Step 0 halves ``t0`` from 1 until ``[0, t0]`` is zero-free; the right end
    is ``no_zero_bound(f)`` (or the Cauchy bound when the leading coefficient
    is negative).  Bisection keeps ``[0, t_l]`` zero-free and stops once the
    bracket is narrower than ``eps`` or a midpoint lands exactly on the zero.
    """
    _check_positive_at_zero(f)
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if f.degree == 0:
        return FirstZeroResult.none()
    chain = sturm_chain(f)

    def count(t: Fraction) -> int:
        return count_zeros(f, _ZERO, t, chain)

    t0 = Fraction(1)
    while count(t0) > 0:
        t0 /= 2
    positive_lead = f.leading * f.coeffs[0] > 0
    t_r = no_zero_bound(f) if positive_lead else cauchy_bound(f)
    t_l = t0
    n_r = count(t_r)
    if n_r == 0:
        if positive_lead:
            return FirstZeroResult.none()
        raise AssertionError("sign change without a zero inside the Cauchy bound")
    if n_r == 1 and f(t_r) == 0:
        return FirstZeroResult.exact(t_r)
    while t_r - t_l >= eps:
        t_m = (t_l + t_r) / 2
        n_m = count(t_m)
        if n_m == 0:
            t_l = t_m
        elif n_m == 1 and f(t_m) == 0:
            return FirstZeroResult.exact(t_m)
        else:
            t_r = t_m
    return FirstZeroResult.bracket(t_l, t_r)


def square_free(f: Polynomial) -> Polynomial:
    """``f / gcd(f, f')``: same distinct roots, all simple."""
    if f.is_zero:
        raise ValueError("square-free part of the zero polynomial")
    if f.degree == 0:
        return f
    g = poly_gcd(f, derivative(f))
    return f.divmod(g)[0]


def _simplest_between(a: Fraction, b: Fraction) -> Fraction:
    """Rational with the smallest denominator in the open interval ``(a, b)``, ``0 <= a < b``."""
    fl = math.floor(a)
    if fl + 1 < b:
        return Fraction(fl + 1)
    if a == fl:
        # a integer and b <= a + 1
        if b - a > 0:
            frac = 1 / (b - a)
            return fl + Fraction(1, math.floor(frac) + 1)
    # a, b share integer part fl
    lo, hi = a - fl, b - fl
    # 1/hi < 1/lo  (lo may be 0 only when handled above)
    return fl + 1 / _simplest_between(1 / hi, 1 / lo)


def _refine(sf: Polynomial, a: Fraction, b: Fraction, eps: Fraction) -> FirstZeroResult:
    """Narrow an isolating interval ``(a, b)`` of a simple root of ``sf``.

    Each step first probes the simplest rational in the interval, which finds
    roots with small denominators exactly, then halves the interval by sign.
    """
    sa = sf(a) > 0
    while True:
        c = _simplest_between(a, b)
        vc = sf(c)
        if vc == 0:
            return FirstZeroResult.exact(c)
        if (vc > 0) == sa:
            a = c
        else:
            b = c
        if b - a < eps:
            return FirstZeroResult.bracket(a, b)
        m = (a + b) / 2
        vm = sf(m)
        if vm == 0:
            return FirstZeroResult.exact(m)
        if (vm > 0) == sa:
            a = m
        else:
            b = m
        if b - a < eps:
            return FirstZeroResult.bracket(a, b)


def _non_root_split(sf: Polynomial, a: Fraction, b: Fraction) -> Fraction:
    k = 2
    while True:
        for j in range(1, k):
            m = a + (b - a) * Fraction(j, k)
            if sf(m) != 0:
                return m
        k += 1


def isolate_positive_roots(sf: Polynomial) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals ``(a, b)``, sorted, each holding exactly one positive root.

    ``sf`` must be square-free with ``sf(0) != 0``; interval endpoints are
    never roots.
    """
    if sf.degree < 1:
        return []
    chain = sturm_chain(sf)
    bound = cauchy_bound(sf)

    def v(t):
        return sign_changes(chain, t)

    out = []
    stack = [(_ZERO, bound, v(_ZERO), v(bound))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = _non_root_split(sf, a, b)
        vm = v(m)
        stack.append((a, m, va, vm))
        stack.append((m, b, vm, vb))
    out.sort()
    return out


def first_sign_crossing(f: Polynomial, eps: ScalarLike = DEFAULT_EPS) -> FirstZeroResult:
    """First positive zero at which ``f`` actually changes sign.

    Zeros of even multiplicity (touch points) are skipped.  The returned
    point ``c`` satisfies ``f >= 0`` on ``[0, c]``; ``"none"`` means
    ``f >= 0`` on all of ``[0, oo)``.
    """
    _check_positive_at_zero(f)
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    sf = square_free(f)
    for a, b in isolate_positive_roots(sf):
        # (root, b] holds no zero of f, so the sign of f(b) is the sign just past the root
        if f(b) < 0:
            return _refine(sf, a, b, eps)
    return FirstZeroResult.none()
