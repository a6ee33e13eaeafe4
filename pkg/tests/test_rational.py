import math
import random
from fractions import Fraction

import pytest
import sympy

from instances import random_box_instance
from invstep.exceptions import NoPositiveThresholdError, SingularMatrixError
from invstep.invariance import LinearSystem, Polyhedron, min_gamma, verify_discrete
from invstep.linalg import Matrix, is_nonnegative
from invstep.poly import Polynomial, count_zeros
from invstep.rational import (POLE, RationalFunction, default_max_order, derivative_numerator,
                              eval_matrix, radius_abs_monotonicity, rational_threshold)
from invstep.taylor import PolynomialScheme, taylor_threshold

F = Fraction
BOX = Polyhedron.box([-1, -1], [1, 1])
ORTHANT = Polyhedron(Matrix([[-1, 0], [0, -1]]), [0, 0])
I2 = Matrix.identity(2)
CONTRACT = LinearSystem(-I2)
t = sympy.Symbol("t")


def to_sympy(r: RationalFunction):
    g = sum(sympy.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(r.g.coeffs))
    h = sum(sympy.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(r.h.coeffs))
    return g / h


def scan_rho(r: RationalFunction, orders: int, step=F(1, 64), limit=8):
    """Largest grid point kappa with every derivative of r >= 0 on the grid in [-kappa, 0]."""
    expr = to_sympy(r)
    derivs = [sympy.diff(expr, t, i) for i in range(orders + 1)]
    kappa = F(0)
    while kappa < limit:
        x = -(kappa + step)
        sx = sympy.Rational(x.numerator, x.denominator)
        vals = [d.subs(t, sx) for d in derivs]
        if any(not v.is_finite or v < 0 for v in vals):
            return kappa
        kappa += step
    return None


RHO_CASES = [
    ("forward euler", RationalFunction.taylor(1), F(1), 0),
    ("taylor 2", RationalFunction.taylor(2), F(1), 1),
    ("taylor 3", RationalFunction.taylor(3), F(1), 2),
    ("taylor 4", RationalFunction.taylor(4), F(1), 3),
    ("trapezoidal", RationalFunction.trapezoidal(), F(2), 0),
    ("square of half step", RationalFunction(Polynomial([1, 1, F(1, 4)])), F(2), 1),
    ("pade-like", RationalFunction(Polynomial([1, F(1, 3)]), Polynomial([1, F(-2, 3)])), F(3), 0),
]


class TestRationalFunction:
    def test_forward_euler_map(self):
        M = Matrix([[F(1, 2), 3], [-1, 0]])
        assert eval_matrix(RationalFunction.taylor(1), M) == M.add_identity(1)

    def test_backward_euler_map(self):
        assert eval_matrix(RationalFunction.backward_euler(), I2.scale(F(-1, 2))) == I2.scale(F(2, 3))

    def test_trapezoidal_map(self):
        assert eval_matrix(RationalFunction.trapezoidal(), -I2) == I2.scale(F(1, 3))

    def test_commutes(self):
        r = RationalFunction(Polynomial([1, 2, F(1, 3)]), Polynomial([1, F(-1, 2), F(1, 5)]))
        M = Matrix([[F(-1, 2), 1], [F(1, 4), -1]])
        g = sum((M.power(k).scale(c) for k, c in enumerate(r.g.coeffs)), Matrix.zeros(2))
        h = sum((M.power(k).scale(c) for k, c in enumerate(r.h.coeffs)), Matrix.zeros(2))
        assert eval_matrix(r, M) == g @ h.inverse() == h.inverse() @ g

    def test_singular_denominator(self):
        with pytest.raises(SingularMatrixError):
            eval_matrix(RationalFunction.backward_euler(), I2)

    def test_zero_denominator(self):
        with pytest.raises(ValueError):
            RationalFunction(Polynomial([1]), Polynomial([]))


class TestDerivativeNumerator:
    def test_backward_euler_factorials(self):
        r = RationalFunction.backward_euler()
        for i in range(6):
            assert derivative_numerator(r, i) == Polynomial([math.factorial(i)])

    def test_forward_euler(self):
        r = RationalFunction.taylor(1)
        assert derivative_numerator(r, 0) == Polynomial([1, 1])
        assert derivative_numerator(r, 1) == Polynomial([1])
        assert all(derivative_numerator(r, i).is_zero for i in range(2, 6))

    def test_trapezoidal_first(self):
        assert derivative_numerator(RationalFunction.trapezoidal(), 1) == Polynomial([1])

    def test_against_sympy(self):
        r = RationalFunction(Polynomial([1, F(2, 3), F(-1, 5)]), Polynomial([1, F(-1, 4), F(1, 7)]))
        expr = to_sympy(r)
        h = to_sympy(RationalFunction(r.h))
        for i in range(5):
            N = derivative_numerator(r, i)
            Nsym = sum(sympy.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(N.coeffs))
            assert sympy.simplify(sympy.diff(expr, t, i) - Nsym / h ** (i + 1)) == 0


class TestRadius:
    @pytest.mark.parametrize("name, r, rho, binding", RHO_CASES, ids=[c[0] for c in RHO_CASES])
    def test_known_values(self, name, r, rho, binding):
        res = radius_abs_monotonicity(r)
        assert res.rho == rho and res.binding_order == binding

    @pytest.mark.parametrize("name, r, rho, binding", RHO_CASES, ids=[c[0] for c in RHO_CASES])
    def test_scan_oracle(self, name, r, rho, binding):
        N = default_max_order(r)
        scanned = scan_rho(r, N)
        res = radius_abs_monotonicity(r, N)
        assert scanned is not None
        assert scanned <= res.rho < scanned + F(1, 64)

    def test_backward_euler_infinite(self):
        res = radius_abs_monotonicity(RationalFunction.backward_euler(), 20)
        assert res.kind == "infinite" and res.checked_order == 20 and res.binding_order is None
        assert scan_rho(RationalFunction.backward_euler(), 8) is None

    def test_polynomial_is_exhaustive(self):
        res = radius_abs_monotonicity(RationalFunction.taylor(3))
        assert res.exhaustive
        assert not radius_abs_monotonicity(RationalFunction.trapezoidal()).exhaustive

    def test_default_order(self):
        assert default_max_order(RationalFunction.trapezoidal()) == 6
        assert radius_abs_monotonicity(RationalFunction.taylor(2)).checked_order == 6

    def test_requires_r0_one(self):
        with pytest.raises(ValueError):
            radius_abs_monotonicity(RationalFunction(Polynomial([2, 1])))

    def test_order_too_small(self):
        with pytest.raises(ValueError):
            radius_abs_monotonicity(RationalFunction.trapezoidal(), 3)

    def test_decreasing_at_zero(self):
        with pytest.raises(NoPositiveThresholdError):
            radius_abs_monotonicity(RationalFunction(Polynomial([1, -1])))

    def test_normalizes_denominator_sign(self):
        r = RationalFunction(Polynomial([-1, F(-1, 2)]), Polynomial([-1, F(1, 2)]))
        assert radius_abs_monotonicity(r).rho == 2

    def test_pole_cap(self):
        # (1 + t)(1 + t/2) / (1 + t/2): the denominator vanishes at -2, order 0 binds first at -1
        r = RationalFunction(Polynomial([1, F(3, 2), F(1, 2)]), Polynomial([1, F(1, 2)]))
        res = radius_abs_monotonicity(r)
        assert res.pole is not None and res.pole.found and res.pole.lo <= 2 <= res.pole.hi
        assert res.rho == 1 and res.binding_order == 0

    def test_pole_binds(self):
        # 1 / (1 - t) written over a denominator with an extra factor (1 + t) that is
        # cancelled in the numerator: r = (1 + t) / ((1 - t)(1 + t)), pole cap at -1
        r = RationalFunction(Polynomial([1, 1]), Polynomial([1, 0, -1]))
        res = radius_abs_monotonicity(r)
        assert res.binding_order == POLE
        assert 0 < res.rho < 1 and 1 - res.rho <= F(1, 2**40)

    @pytest.mark.parametrize("name, r, rho, binding", RHO_CASES, ids=[c[0] for c in RHO_CASES])
    def test_soundness_and_tightness(self, name, r, rho, binding):
        N = default_max_order(r)
        res = radius_abs_monotonicity(r, N)
        expr = to_sympy(r)
        rng = random.Random(1)
        samples = [-res.rho * F(rng.randint(0, 10**6), 10**6) for _ in range(200)] + [-res.rho]
        for i in range(N + 1):
            d = sympy.diff(expr, t, i)
            for x in samples:
                assert d.subs(t, sympy.Rational(x.numerator, x.denominator)) >= 0
        delta = F(1, 10**6)
        Nb = derivative_numerator(r, res.binding_order)
        assert count_zeros(Nb, -res.rho - delta, -res.rho + delta) >= 1


class TestRationalThreshold:
    def test_forward_euler_box(self):
        rep = rational_threshold(CONTRACT, BOX, RationalFunction.taylor(1))
        assert rep.tau.value == 2 and rep.gamma == F(1, 2)

    def test_backward_euler_box(self):
        assert not rational_threshold(CONTRACT, BOX, RationalFunction.backward_euler()).tau.is_finite

    def test_trapezoidal_box(self):
        assert rational_threshold(CONTRACT, BOX, RationalFunction.trapezoidal()).tau.value == 4

    @pytest.mark.parametrize("r", [RationalFunction.taylor(1), RationalFunction.taylor(3),
                                   RationalFunction.trapezoidal(), RationalFunction.backward_euler()])
    def test_orthant_infinite(self, r):
        rep = rational_threshold(LinearSystem(Matrix([[0, 1], [1, 0]])), ORTHANT, r)
        assert not rep.tau.is_finite and rep.rho is None

    def test_requires_r0_one(self):
        with pytest.raises(ValueError):
            rational_threshold(CONTRACT, BOX, RationalFunction(Polynomial([3]), Polynomial([2])))

    def test_consistent_with_taylor_one(self):
        rng = random.Random(4)
        for _ in range(10):
            inst = random_box_instance(rng)
            rep = rational_threshold(inst.system, inst.halfspace, RationalFunction.taylor(1))
            assert rep.tau.value == 1 / rep.gamma
            assert rep.tau.value == taylor_threshold(inst.system, inst.halfspace,
                                                     PolynomialScheme.taylor(1)).tau.value

    def test_monotone_map_on_certificate(self):
        rng = random.Random(6)
        for _ in range(6):
            inst = random_box_instance(rng)
            for r in (RationalFunction.taylor(2), RationalFunction.trapezoidal()):
                rep = rational_threshold(inst.system, inst.halfspace, r)
                H = min_gamma(inst.system, inst.halfspace).H
                for dt in (rep.tau.value / 2, rep.tau.value):
                    Ht = eval_matrix(r, H.scale(dt))
                    assert is_nonnegative(Ht)
                    A_d = eval_matrix(r, inst.A.scale(dt))
                    assert Ht @ inst.halfspace.G == inst.halfspace.G @ A_d
                    assert verify_discrete(A_d, inst.halfspace) is not None
