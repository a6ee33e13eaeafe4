from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from instances import naive_mat_mul
from invstep.exceptions import DimensionError, SingularMatrixError
from invstep.linalg import (Matrix, as_fraction, is_nonnegative, is_offdiag_nonnegative,
                            mat_mul, min_diagonal_shift)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=30)


def matrices(rows, cols):
    return st.lists(st.lists(fractions, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


class TestScalars:
    @pytest.mark.parametrize("text, value", [
        ("3", Fraction(3)), ("-4/6", Fraction(-2, 3)), ("0.125", Fraction(1, 8)),
        ("1e-3", Fraction(1, 1000)), (" 7 / 2 ", Fraction(7, 2)), (5, Fraction(5)),
    ])
    def test_literals(self, text, value):
        assert as_fraction(text) == value

    @pytest.mark.parametrize("bad", [0.5, True, "abc", "1/2/3", None])
    def test_rejects_inexact_or_junk(self, bad):
        with pytest.raises((TypeError, ValueError)):
            as_fraction(bad)

    @given(fractions, fractions)
    def test_exact_add_sub(self, a, b):
        assert (a + b) - b == a


class TestMatMul:
    def test_identity_left(self):
        M = Matrix([[1, 2], ["1/3", -4]])
        assert mat_mul(Matrix.identity(2), M) == M

    def test_involution(self):
        S = Matrix([[0, 1], [1, 0]])
        assert S @ S == Matrix.identity(2)

    @given(matrices(3, 3), matrices(3, 3))
    def test_matches_triple_loop(self, a, b):
        assert mat_mul(Matrix(a), Matrix(b)).tolist() == naive_mat_mul(a, b)

    @given(matrices(2, 3), matrices(3, 4))
    def test_rectangular(self, a, b):
        assert mat_mul(Matrix(a), Matrix(b)).tolist() == naive_mat_mul(a, b)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            mat_mul(Matrix([[1, 2]]), Matrix([[1, 2]]))


class TestPredicates:
    def test_nonnegative(self):
        assert is_nonnegative(Matrix.zeros(2))
        assert not is_nonnegative(Matrix([[1, -1], [0, 2]]))
        assert is_nonnegative(Matrix([[0, 3], [2, 0]]))

    def test_offdiag_nonnegative(self):
        assert is_offdiag_nonnegative(-Matrix.identity(2))
        assert is_offdiag_nonnegative(Matrix([[-5, 1], [2, -7]]))
        assert not is_offdiag_nonnegative(Matrix([[0, -1], [0, 0]]))

    def test_offdiag_needs_square(self):
        with pytest.raises(DimensionError):
            is_offdiag_nonnegative(Matrix([[1, 2, 3]]))

    @pytest.mark.parametrize("m, shift", [
        (-Matrix.identity(2), 1),
        (Matrix.zeros(2), 0),
        (Matrix([[-3, 1], [0, "-1/2"]]), 3),
    ])
    def test_min_diagonal_shift(self, m, shift):
        assert min_diagonal_shift(m) == shift

    def test_shift_precondition(self):
        with pytest.raises(ValueError):
            min_diagonal_shift(Matrix([[0, -1], [0, 0]]))

    @given(matrices(3, 3))
    def test_shift_is_least(self, rows):
        m = Matrix([[abs(x) if i != j else x for j, x in enumerate(r)] for i, r in enumerate(rows)])
        g = min_diagonal_shift(m)
        assert g >= 0 and is_nonnegative(m.add_identity(g))
        if g > 0:
            assert not is_nonnegative(m.add_identity(g - Fraction(1, 10**6)))


class TestSolve:
    @given(matrices(3, 3), matrices(3, 1))
    def test_solution_checks(self, a, b):
        A, B = Matrix(a), Matrix(b)
        try:
            X = A.solve(B)
        except SingularMatrixError:
            return
        assert A @ X == B

    def test_singular(self):
        with pytest.raises(SingularMatrixError):
            Matrix([[1, 2], [2, 4]]).inverse()

    def test_power(self):
        M = Matrix([[1, 1], [0, 1]])
        assert M.power(5) == Matrix([[1, 5], [0, 1]])
        assert M.power(0) == Matrix.identity(2)
