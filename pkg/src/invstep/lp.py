"""Dense two-phase simplex over exact rationals.

Problems have the form::

    minimize    c.x
    subject to  A x  = d
                B x <= e
                x_j >= 0   for j with nonneg[j], free otherwise

Free variables are split into a difference of two nonnegative columns and
inequalities receive slack columns, so the tableau is always in standard
form.  Pivoting follows Bland's rule, which guarantees termination.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exceptions import DimensionError
from .linalg import Vector, as_vector, dot

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class LinearProgram:
    """A linear program in the mixed form described in the module docstring.

    Constraint blocks are given as lists of rows (each row a sequence of
    rationals); ``nonneg`` defaults to all variables nonnegative.
    """

    objective: Vector
    eq_lhs: tuple = ()
    eq_rhs: Vector = ()
    ineq_lhs: tuple = ()
    ineq_rhs: Vector = ()
    nonneg: tuple = None  # type: ignore[assignment]

    def __post_init__(self):
        obj = as_vector(self.objective)
        n = len(obj)
        eq = tuple(as_vector(r) for r in self.eq_lhs)
        iq = tuple(as_vector(r) for r in self.ineq_lhs)
        d = as_vector(self.eq_rhs)
        e = as_vector(self.ineq_rhs)
        mask = tuple(bool(x) for x in self.nonneg) if self.nonneg is not None else (True,) * n
        if len(eq) != len(d):
            raise DimensionError(f"{len(eq)} equality rows but {len(d)} right-hand sides")
        if len(iq) != len(e):
            raise DimensionError(f"{len(iq)} inequality rows but {len(e)} right-hand sides")
        if any(len(r) != n for r in eq + iq):
            raise DimensionError(f"constraint rows must have {n} columns")
        if len(mask) != n:
            raise DimensionError(f"nonneg mask has length {len(mask)}, expected {n}")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "eq_lhs", eq)
        object.__setattr__(self, "eq_rhs", d)
        object.__setattr__(self, "ineq_lhs", iq)
        object.__setattr__(self, "ineq_rhs", e)
        object.__setattr__(self, "nonneg", mask)

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        """Exact check of every constraint at ``x``."""
        if len(x) != self.num_vars:
            return False
        if any(self.nonneg[j] and x[j] < 0 for j in range(self.num_vars)):
            return False
        if any(dot(r, x) != v for r, v in zip(self.eq_lhs, self.eq_rhs)):
            return False
        return all(dot(r, x) <= v for r, v in zip(self.ineq_lhs, self.ineq_rhs))


@dataclass(frozen=True)
class LpOutcome:
    status: str
    solution: Optional[Vector] = None
    objective_value: Optional[Fraction] = None
    pivots: int = field(default=0, compare=False)

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Standard-form tableau: rows ``T[r] . x = rhs[r]`` with a basis."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        p = row[c]
        if p != _ONE:
            self.rows[r] = row = [x / p for x in row]
            self.rhs[r] = self.rhs[r] / p
        nz = [(j, x) for j, x in enumerate(row) if x != 0]
        for k, other in enumerate(self.rows):
            f = other[c]
            if k == r or f == 0:
                continue
            for j, x in nz:
                other[j] -= f * x
            self.rhs[k] -= f * self.rhs[r]
        self.basis[r] = c
        self.pivots += 1

    def reduced_costs(self, cost: Sequence[Fraction]) -> list[Fraction]:
        red = list(cost)
        for r, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                for j, x in enumerate(self.rows[r]):
                    if x:
                        red[j] -= cb * x
        return red

    def run(self, cost: Sequence[Fraction], allowed: Sequence[bool]) -> bool:
        """Minimize ``cost.x``; returns False when unbounded."""
        while True:
            red = self.reduced_costs(cost)
            enter = next((j for j, v in enumerate(red) if v < 0 and allowed[j]), None)
            if enter is None:
                return True
            best = None
            for r, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[r] / a
                    key = (ratio, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return False
            self.pivot(best[1], enter)


def _standard_form(lp: LinearProgram):
    """Columns: split original variables, then one slack per inequality."""
    col_map = []  # (original index, sign)
    for j in range(lp.num_vars):
        col_map.append((j, 1))
        if not lp.nonneg[j]:
            col_map.append((j, -1))
    n_struct = len(col_map)
    n_slack = len(lp.ineq_lhs)
    rows, rhs = [], []
    for r, v in zip(lp.eq_lhs, lp.eq_rhs):
        rows.append([r[j] * s for j, s in col_map] + [_ZERO] * n_slack)
        rhs.append(v)
    for k, (r, v) in enumerate(zip(lp.ineq_lhs, lp.ineq_rhs)):
        slack = [_ZERO] * n_slack
        slack[k] = _ONE
        rows.append([r[j] * s for j, s in col_map] + slack)
        rhs.append(v)
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    cost = [lp.objective[j] * s for j, s in col_map] + [_ZERO] * n_slack
    return rows, rhs, cost, col_map, n_struct + n_slack


def _phase_one(lp: LinearProgram):
    rows, rhs, cost, col_map, n = _standard_form(lp)
    m = len(rows)
    # artificial columns n .. n+m-1
    for i, row in enumerate(rows):
        row.extend(_ONE if k == i else _ZERO for k in range(m))
    tab = _Tableau(rows, rhs, [n + i for i in range(m)])
    art_cost = [_ZERO] * n + [_ONE] * m
    tab.run(art_cost, [True] * (n + m))
    infeasibility = sum((tab.rhs[r] for r, b in enumerate(tab.basis) if b >= n), _ZERO)
    if infeasibility > 0:
        return None, cost, col_map, n, tab.pivots
    # drive zero-valued artificials out of the basis; drop redundant rows
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= n:
            c = next((j for j in range(n) if tab.rows[r][j] != 0), None)
            if c is None:
                del tab.rows[r], tab.rhs[r], tab.basis[r]
                continue
            tab.pivot(r, c)
        r += 1
    for row in tab.rows:
        del row[n:]
    return tab, cost, col_map, n, tab.pivots


def _extract(tab: _Tableau, col_map, n_cols: int, num_vars: int) -> Vector:
    values = [_ZERO] * n_cols
    for r, b in enumerate(tab.basis):
        values[b] = tab.rhs[r]
    x = [_ZERO] * num_vars
    for k, (j, s) in enumerate(col_map):
        x[j] += s * values[k]
    return tuple(x)


def feasibility(lp: LinearProgram) -> LpOutcome:
    """Phase I only: some exact feasible point, or ``infeasible``."""
    tab, _, col_map, n, piv = _phase_one(lp)
    if tab is None:
        return LpOutcome(INFEASIBLE, pivots=piv)
    x = _extract(tab, col_map, n, lp.num_vars)
    assert lp.is_feasible_point(x), "phase I produced an infeasible point"
    return LpOutcome(OPTIMAL, x, dot(lp.objective, x), pivots=piv)


def solve(lp: LinearProgram) -> LpOutcome:
    """Minimize ``lp.objective`` exactly."""
    tab, cost, col_map, n, piv = _phase_one(lp)
    if tab is None:
        return LpOutcome(INFEASIBLE, pivots=piv)
    bounded = tab.run(cost, [True] * n)
    if not bounded:
        return LpOutcome(UNBOUNDED, pivots=tab.pivots)
    x = _extract(tab, col_map, n, lp.num_vars)
    assert lp.is_feasible_point(x), "simplex produced an infeasible point"
    return LpOutcome(OPTIMAL, x, dot(lp.objective, x), pivots=tab.pivots)
