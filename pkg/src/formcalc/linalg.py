"""3x3 determinants (symbolic and numeric) and basic vector products.

The symbolic determinant uses cofactor expansion along the first row;
the numeric one uses the diagonal (Sarrus) rule.  The two are
cross-checked against each other in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .expr import Expression, Mul, Sub, as_expr, simplify

__all__ = ["Vec3", "Matrix3Sym", "det3_sym", "det3_num", "cross", "dot"]


@dataclass(frozen=True)
class Vec3:
    """A point or vector in R^3 with finite components."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            if not math.isfinite(c):
                raise ValueError("Vec3 components must be finite")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def __iter__(self):
        return iter((self.x, self.y, self.z))


@dataclass(frozen=True)
class Matrix3Sym:
    """3x3 matrix of expressions, row-major."""

    rows: tuple[tuple[Expression, Expression, Expression], ...]

    def __post_init__(self):
        if len(self.rows) != 3 or any(len(r) != 3 for r in self.rows):
            raise ValueError("Matrix3Sym needs exactly 3 rows of 3 entries")
        coerced = tuple(tuple(as_expr(e) for e in row) for row in self.rows)
        object.__setattr__(self, "rows", coerced)

    def __getitem__(self, ij: tuple[int, int]) -> Expression:
        i, j = ij
        return self.rows[i][j]


def det3_sym(m: Matrix3Sym) -> Expression:
    """Symbolic determinant by cofactor expansion along the first row."""
    (a11, a12, a13), (a21, a22, a23), (a31, a32, a33) = m.rows
    term1 = Mul(a11, Sub(Mul(a22, a33), Mul(a23, a32)))
    term2 = Mul(a12, Sub(Mul(a21, a33), Mul(a23, a31)))
    term3 = Mul(a13, Sub(Mul(a21, a32), Mul(a22, a31)))
    return simplify(Sub(term1, term2) + term3)


def det3_num(m) -> float:
    """Numeric determinant by the diagonal rule (three down-right products
    minus three up-right products)."""
    a = np.asarray(m, dtype=np.float64)
    if a.shape != (3, 3):
        raise ValueError("det3_num needs a 3x3 array")
    down = (a[0, 0] * a[1, 1] * a[2, 2]
            + a[0, 1] * a[1, 2] * a[2, 0]
            + a[0, 2] * a[1, 0] * a[2, 1])
    up = (a[0, 0] * a[1, 2] * a[2, 1]
          + a[0, 1] * a[1, 0] * a[2, 2]
          + a[0, 2] * a[1, 1] * a[2, 0])
    return float(down - up)


def cross(a: Vec3, b: Vec3) -> Vec3:
    return Vec3(a.y * b.z - a.z * b.y,
                a.z * b.x - a.x * b.z,
                a.x * b.y - a.y * b.x)


def dot(a: Vec3, b: Vec3) -> float:
    return a.x * b.x + a.y * b.y + a.z * b.z
