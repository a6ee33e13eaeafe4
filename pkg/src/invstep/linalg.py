"""Exact rational scalars, dense matrices and vectors.

Scalars are :class:`fractions.Fraction`; a vector is a plain tuple of
fractions.  :class:`Matrix` is immutable, row-major and dense.
"""
from __future__ import annotations

import re
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

from .exceptions import DimensionError, SingularMatrixError

Scalar = Fraction
Vector = Tuple[Fraction, ...]
ScalarLike = Union[int, str, Fraction, Decimal]

_RATIONAL_RE = re.compile(r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?(\s*/\s*[+-]?\d+)?\s*$")

__all__ = [
    "Matrix",
    "Vector",
    "as_fraction",
    "as_vector",
    "mat_mul",
    "is_nonnegative",
    "is_offdiag_nonnegative",
    "min_diagonal_shift",
    "dot",
]


def as_fraction(value: ScalarLike) -> Fraction:
    """Convert ``value`` to an exact :class:`Fraction`.

    Strings may be integers, finite decimals (``"0.25"``, ``"1e-3"``) or
    ``"p/q"``.  Floats are rejected, since they usually carry rounding the
    caller did not intend.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise ValueError(f"not an exact rational literal: {value!r}")
        if "/" in value:
            num, den = value.split("/")
            return Fraction(num.strip()) / Fraction(den.strip())
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError(f"float {value!r} is not exact; pass a string or Fraction")
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def as_vector(values: Iterable[ScalarLike]) -> Vector:
    return tuple(as_fraction(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise DimensionError(f"length mismatch {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


class Matrix:
    """Immutable dense matrix of fractions."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, data: Iterable[Iterable[ScalarLike]]):
        rows = [tuple(as_fraction(x) for x in row) for row in data]
        if not rows:
            raise DimensionError("a matrix needs at least one row")
        width = len(rows[0])
        if width == 0 or any(len(r) != width for r in rows):
            raise DimensionError("ragged or empty rows")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "entries", tuple(x for r in rows for x in r))

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _raw(cls, rows: int, cols: int, entries: Sequence[Fraction]) -> "Matrix":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "rows", rows)
        object.__setattr__(obj, "cols", cols)
        object.__setattr__(obj, "entries", tuple(entries))
        return obj

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls._raw(rows, cols, [Fraction(0)] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(n, n, [one if i == j else zero for i in range(n) for j in range(n)])

    @classmethod
    def diag(cls, values: Iterable[ScalarLike]) -> "Matrix":
        vals = as_vector(values)
        n = len(vals)
        return cls._raw(n, n, [vals[i] if i == j else Fraction(0) for i in range(n) for j in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return self.entries[j::self.cols]

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.cols, self.rows, [x for j in range(self.cols) for x in self.col(j)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in self.row(i)) + "]" for i in range(self.rows))
        return f"Matrix([{body}])"

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_shape(other)
        return Matrix._raw(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_shape(other)
        return Matrix._raw(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        return Matrix._raw(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c: ScalarLike) -> "Matrix":
        c = as_fraction(c)
        return Matrix._raw(self.rows, self.cols, [c * a for a in self.entries])

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        return mat_mul(self, other)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for {self.shape} matrix")
        return tuple(dot(self.row(i), v) for i in range(self.rows))

    def add_identity(self, c: ScalarLike) -> "Matrix":
        """Return ``self + c * I``."""
        if not self.is_square:
            raise DimensionError("add_identity needs a square matrix")
        c = as_fraction(c)
        e = list(self.entries)
        for i in range(self.rows):
            e[i * self.cols + i] += c
        return Matrix._raw(self.rows, self.cols, e)

    def power(self, k: int) -> "Matrix":
        if not self.is_square:
            raise DimensionError("power needs a square matrix")
        if k < 0:
            raise ValueError("negative matrix power")
        result = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def solve(self, rhs: "Matrix") -> "Matrix":
        """Return X with ``self @ X == rhs`` by exact Gauss-Jordan elimination."""
        if not self.is_square:
            raise DimensionError("solve needs a square matrix")
        if rhs.rows != self.rows:
            raise DimensionError(f"rhs has {rhs.rows} rows, expected {self.rows}")
        n, k = self.rows, rhs.cols
        aug = [list(self.row(i)) + list(rhs.row(i)) for i in range(n)]
        for c in range(n):
            piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
            if piv is None:
                raise SingularMatrixError("matrix is singular")
            aug[c], aug[piv] = aug[piv], aug[c]
            p = aug[c][c]
            aug[c] = [x / p for x in aug[c]]
            for r in range(n):
                if r != c and aug[r][c] != 0:
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
        return Matrix._raw(n, k, [x for r in aug for x in r[n:]])

    def inverse(self) -> "Matrix":
        return self.solve(Matrix.identity(self.rows))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Exact product ``a @ b``."""
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    bcols = [b.col(j) for j in range(b.cols)]
    out = []
    for i in range(a.rows):
        r = a.row(i)
        out.extend(dot(r, c) for c in bcols)
    return Matrix._raw(a.rows, b.cols, out)


def is_nonnegative(m: Matrix) -> bool:
    return all(x >= 0 for x in m.entries)


def is_offdiag_nonnegative(m: Matrix) -> bool:
    if not m.is_square:
        raise DimensionError("off-diagonal test needs a square matrix")
    n = m.cols
    return all(x >= 0 for k, x in enumerate(m.entries) if k // n != k % n)


def min_diagonal_shift(m: Matrix) -> Fraction:
    """Least ``g >= 0`` such that ``m + g*I`` is entrywise nonnegative."""
    if not is_offdiag_nonnegative(m):
        raise ValueError("matrix has a negative off-diagonal entry; no diagonal shift helps")
    return max(Fraction(0), -min(m[i, i] for i in range(m.rows)))
