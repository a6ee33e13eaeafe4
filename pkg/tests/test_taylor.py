import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from instances import random_box_instance
from invstep.exceptions import NotInvariantError
from invstep.invariance import LinearSystem, Polyhedron, verify_continuous, verify_discrete
from invstep.linalg import Matrix, is_nonnegative, min_diagonal_shift
from invstep.poly import Polynomial
from invstep.taylor import (PolynomialScheme, ThresholdResult, discrete_H_matrix,
                            discrete_matrix, f_coefficient_polys, taylor_threshold,
                            threshold_for_gamma)

F = Fraction
BOX = Polyhedron.box([-1, -1], [1, 1])
ORTHANT = Polyhedron(Matrix([[-1, 0], [0, -1]]), [0, 0])
I2 = Matrix.identity(2)
CONTRACT = LinearSystem(-I2)

gammas = st.fractions(min_value=F(1, 50), max_value=20, max_denominator=50)
schemes = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=12), min_size=0, max_size=8).map(
    lambda rest: PolynomialScheme((F(1),) + tuple(rest)))


def poly_sum(polys):
    acc = Polynomial([])
    for p in polys:
        acc = acc + p
    return acc


class TestScheme:
    def test_taylor_sigmas(self):
        assert PolynomialScheme.taylor(3).sigmas == (1, 1, F(1, 2), F(1, 6))

    def test_sigma_zero_must_be_one(self):
        with pytest.raises(ValueError):
            PolynomialScheme((F(2), F(1)))


class TestThresholdResult:
    def test_finite_must_be_positive(self):
        with pytest.raises(ValueError):
            ThresholdResult(F(0))

    def test_infinite_renders(self):
        assert str(ThresholdResult.infinite()) == "infinity"


class TestDiscreteMatrix:
    def test_zero_step(self):
        assert discrete_matrix(CONTRACT, PolynomialScheme.taylor(4), 0) == I2

    def test_forward_euler(self):
        assert discrete_matrix(CONTRACT, PolynomialScheme.taylor(1), F(1, 2)) == I2.scale(F(1, 2))

    def test_taylor_two(self):
        assert discrete_matrix(CONTRACT, PolynomialScheme.taylor(2), 1) == I2.scale(F(1, 2))

    def test_general_sigmas_match_power_sum(self):
        A = Matrix([[F(-1, 2), 1], [F(1, 3), -2]])
        s = PolynomialScheme((1, F(2, 3), F(-1, 5), F(1, 7)))
        dt = F(3, 4)
        expect = sum((A.power(i).scale(s.sigmas[i] * dt ** i) for i in range(1, 4)), Matrix.identity(2))
        assert discrete_matrix(LinearSystem(A), s, dt) == expect

    def test_negative_step(self):
        with pytest.raises(ValueError):
            discrete_matrix(CONTRACT, PolynomialScheme.taylor(1), -1)


class TestDiscreteH:
    def test_zero_step(self):
        assert discrete_H_matrix(-Matrix.identity(4), PolynomialScheme.taylor(3), 0) == Matrix.identity(4)

    def test_euler_minus_identity(self):
        dt = F(2, 7)
        assert discrete_H_matrix(-I2, PolynomialScheme.taylor(1), dt) == I2.scale(1 - dt)

    def test_box_taylor_two_step_one(self):
        scheme = PolynomialScheme.taylor(2)
        H = verify_continuous(CONTRACT, BOX).H
        Ht = discrete_H_matrix(H, scheme, 1)
        A_d = discrete_matrix(CONTRACT, scheme, 1)
        assert is_nonnegative(Ht)
        assert Ht @ BOX.G == BOX.G @ A_d
        assert all(x <= y for x, y in zip(Ht.apply(BOX.b), BOX.b))


class TestCoefficientPolys:
    def test_taylor_one(self):
        g = F(3, 5)
        f0, f1 = f_coefficient_polys(PolynomialScheme.taylor(1), g)
        assert f0 == Polynomial([1, -g]) and f1 == Polynomial([0, 1])

    def test_taylor_two(self):
        g = F(7, 3)
        f0, f1, f2 = f_coefficient_polys(PolynomialScheme.taylor(2), g)
        assert f0 == Polynomial([1, -g, g * g / 2])
        assert f1 == Polynomial([0, 1, -g])
        assert f2 == Polynomial([0, 0, F(1, 2)])

    def test_gamma_must_be_positive(self):
        with pytest.raises(ValueError):
            f_coefficient_polys(PolynomialScheme.taylor(2), 0)

    @given(schemes, gammas)
    def test_partition_of_unity(self, scheme, g):
        polys = f_coefficient_polys(scheme, g)
        assert poly_sum(f * g ** i for i, f in enumerate(polys)) == Polynomial([1])

    @given(schemes, st.integers(0, 2**32))
    def test_reconstruction(self, scheme, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 3)
        H = Matrix([[F(rng.randint(-9, 0), 4) if i == j else F(rng.randint(0, 9), 4)
                     for j in range(n)] for i in range(n)])
        g = min_diagonal_shift(H) + F(rng.randint(1, 8), 8)
        polys = f_coefficient_polys(scheme, g)
        shifted = H.add_identity(g)
        for _ in range(3):
            dt = F(rng.randint(0, 40), rng.randint(1, 9))
            lhs = sum((shifted.power(i).scale(f(dt)) for i, f in enumerate(polys)), Matrix.zeros(n))
            assert lhs == discrete_H_matrix(H, scheme, dt)


class TestTaylorThreshold:
    @pytest.mark.parametrize("p", [1, 2, 3, 4])
    def test_box(self, p):
        rep = taylor_threshold(CONTRACT, BOX, PolynomialScheme.taylor(p))
        assert rep.gamma == F(1, 2)
        assert rep.tau.value == 2

    def test_box_p1_crossing_in_f0(self):
        rep = taylor_threshold(CONTRACT, BOX, PolynomialScheme.taylor(1))
        assert rep.per_poly_zeros[0].value == 2 and not rep.per_poly_zeros[1].found

    def test_box_p2_binding_polynomial(self):
        rep = taylor_threshold(CONTRACT, BOX, PolynomialScheme.taylor(2))
        f0, f1, f2 = rep.per_poly_zeros
        assert not f0.found and f1.value == 2 and not f2.found

    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_orthant_infinite(self, p):
        rep = taylor_threshold(LinearSystem(Matrix([[0, 1], [1, 0]])), ORTHANT, PolynomialScheme.taylor(p))
        assert not rep.tau.is_finite and rep.gamma <= 0

    def test_not_invariant(self):
        with pytest.raises(NotInvariantError):
            taylor_threshold(LinearSystem(I2), BOX, PolynomialScheme.taylor(1))

    def test_negative_sigmas_refused(self):
        with pytest.raises(ValueError):
            taylor_threshold(CONTRACT, BOX, PolynomialScheme((1, 1, F(-1, 2))))

    def test_explicit_certificate_uses_its_own_shift(self):
        rep = taylor_threshold(CONTRACT, BOX, PolynomialScheme.taylor(1), H=-Matrix.identity(4))
        assert rep.gamma == 1 and rep.tau.value == 1

    def test_larger_gamma_smaller_tau(self):
        rng = random.Random(2)
        for _ in range(30):
            g1 = F(rng.randint(1, 50), rng.randint(1, 10))
            g2 = g1 + F(rng.randint(1, 50), rng.randint(1, 10))
            for scheme in (PolynomialScheme.taylor(1), PolynomialScheme.taylor(3)):
                assert threshold_for_gamma(scheme, g2).tau.value <= threshold_for_gamma(scheme, g1).tau.value

    def test_soundness_on_random_instances(self):
        rng = random.Random(13)
        for _ in range(8):
            inst = random_box_instance(rng)
            for p in (1, 2, 3):
                scheme = PolynomialScheme.taylor(p)
                rep = taylor_threshold(inst.system, inst.halfspace, scheme)
                tau = rep.tau.value
                for dt in (tau / 4, tau / 2, 3 * tau / 4, tau):
                    A_d = discrete_matrix(inst.system, scheme, dt)
                    assert verify_discrete(A_d, inst.halfspace) is not None
                    Ht = discrete_H_matrix(rep.H, scheme, dt)
                    assert is_nonnegative(Ht)

    def test_zero_padded_scheme_agrees(self):
        # sigma = (1, 1, 1/2, 1/6, 1/24) is Taylor-4; a zero-padded variant must agree
        a = threshold_for_gamma(PolynomialScheme.taylor(4), F(3, 2)).tau
        b = threshold_for_gamma(PolynomialScheme(PolynomialScheme.taylor(4).sigmas + (0,)), F(3, 2)).tau
        assert a == b
