"""Differential k-forms on a box in R^3 and the three exterior-derivative maps.

Basis conventions are fixed throughout the package: 1-forms are written
over (dx, dy, dz) and 2-forms over (dy dz, dx dz, dx dy), with

    d0: f  ->  f_x dx + f_y dy + f_z dz
    d1: M dx + N dy + P dz  ->  (P_y - N_z) dy dz + (M_z - P_x) dx dz
                                + (N_x - M_y) dx dy
    d2: S dy dz + T dx dz + U dx dy  ->  (S_x + T_y + U_z) dx dy dz

Note the middle 2-form basis element is dx dz (not dz dx); the sign in
d1's middle coefficient and in the surface-integral determinant are
chosen together so the integral theorems hold exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FormMismatchError
from .expr import (Constant, Expression, Mul, Neg, as_expr, diff,
                   free_variables, simplify)

__all__ = [
    "DomainBox", "Form0", "Form1", "Form2", "Form3", "VectorField",
    "d0", "d1", "d2", "gradient", "curl", "divergence", "linear_combine",
]

_COORDS = ("x", "y", "z")


@dataclass(frozen=True)
class DomainBox:
    """Axis-aligned box [x0,x1] x [y0,y1] x [z0,z1]; the domain every form
    and zero test is relative to."""

    x: tuple[float, float]
    y: tuple[float, float]
    z: tuple[float, float]

    def __post_init__(self):
        for axis, (lo, hi) in zip(_COORDS, (self.x, self.y, self.z)):
            lo, hi = float(lo), float(hi)
            if not lo < hi:
                raise ValueError(f"{axis} interval must have lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "x", (float(self.x[0]), float(self.x[1])))
        object.__setattr__(self, "y", (float(self.y[0]), float(self.y[1])))
        object.__setattr__(self, "z", (float(self.z[0]), float(self.z[1])))

    @classmethod
    def cube(cls, lo: float, hi: float) -> "DomainBox":
        return cls((lo, hi), (lo, hi), (lo, hi))

    @property
    def bounds(self) -> tuple[tuple[float, float], ...]:
        return (self.x, self.y, self.z)

    def contains_point(self, point, pad_rel: float = 1e-9) -> bool:
        return self.first_escape(np.asarray(point, dtype=float).reshape(1, 3),
                                 pad_rel) is None

    def first_escape(self, points: np.ndarray, pad_rel: float = 1e-9):
        """Index and axis of the first point outside the (padded) box, or None.

        The pad absorbs roundoff from parameterizations that touch the
        boundary (e.g. cos/sin hitting an edge).
        """
        for axis, (lo, hi) in enumerate(self.bounds):
            pad = pad_rel * (1.0 + max(abs(lo), abs(hi)))
            col = points[:, axis]
            bad = np.nonzero((col < lo - pad) | (col > hi + pad))[0]
            if bad.size:
                return int(bad[0]), _COORDS[axis]
        return None


def _check_coefficient(expression: Expression, role: str) -> Expression:
    extra = free_variables(expression) - set(_COORDS)
    if extra:
        raise ValueError(
            f"{role} may only use variables x, y, z; found {sorted(extra)}")
    return expression


@dataclass(frozen=True)
class Form0:
    """0-form: a scalar function of (x, y, z) on a box."""

    f: Expression
    box: DomainBox

    def __post_init__(self):
        object.__setattr__(self, "f", _check_coefficient(as_expr(self.f), "0-form coefficient"))

    degree = 0

    @property
    def coefficients(self) -> tuple[Expression, ...]:
        return (self.f,)


@dataclass(frozen=True)
class Form1:
    """1-form M dx + N dy + P dz."""

    M: Expression
    N: Expression
    P: Expression
    box: DomainBox

    def __post_init__(self):
        for name in ("M", "N", "P"):
            object.__setattr__(self, name,
                               _check_coefficient(as_expr(getattr(self, name)),
                                                  f"1-form coefficient {name}"))

    degree = 1

    @property
    def coefficients(self) -> tuple[Expression, ...]:
        return (self.M, self.N, self.P)

    @classmethod
    def from_field(cls, field: "VectorField") -> "Form1":
        """The correspondence eta = F . dr."""
        return cls(field.fx, field.fy, field.fz, field.box)

    def as_field(self) -> "VectorField":
        return VectorField(self.M, self.N, self.P, self.box)


@dataclass(frozen=True)
class Form2:
    """2-form S dy dz + T dx dz + U dx dy."""

    S: Expression
    T: Expression
    U: Expression
    box: DomainBox

    def __post_init__(self):
        for name in ("S", "T", "U"):
            object.__setattr__(self, name,
                               _check_coefficient(as_expr(getattr(self, name)),
                                                  f"2-form coefficient {name}"))

    degree = 2

    @property
    def coefficients(self) -> tuple[Expression, ...]:
        return (self.S, self.T, self.U)

    @classmethod
    def from_field(cls, field: "VectorField") -> "Form2":
        """The correspondence omega = G . dA."""
        return cls(field.fx, field.fy, field.fz, field.box)

    def as_field(self) -> "VectorField":
        return VectorField(self.S, self.T, self.U, self.box)


@dataclass(frozen=True)
class Form3:
    """3-form g dx dy dz."""

    g: Expression
    box: DomainBox

    def __post_init__(self):
        object.__setattr__(self, "g", _check_coefficient(as_expr(self.g), "3-form coefficient"))

    degree = 3

    @property
    def coefficients(self) -> tuple[Expression, ...]:
        return (self.g,)


@dataclass(frozen=True)
class VectorField:
    """A vector field on a box, components along i, j, k."""

    fx: Expression
    fy: Expression
    fz: Expression
    box: DomainBox

    def __post_init__(self):
        for name in ("fx", "fy", "fz"):
            object.__setattr__(self, name,
                               _check_coefficient(as_expr(getattr(self, name)),
                                                  f"field component {name}"))

    @property
    def components(self) -> tuple[Expression, Expression, Expression]:
        return (self.fx, self.fy, self.fz)


KForm = Form0 | Form1 | Form2 | Form3


def d0(f: Form0) -> Form1:
    """Exterior derivative of a 0-form: df = f_x dx + f_y dy + f_z dz."""
    return Form1(simplify(diff(f.f, "x")),
                 simplify(diff(f.f, "y")),
                 simplify(diff(f.f, "z")),
                 f.box)


def d1(eta: Form1) -> Form2:
    """Exterior derivative of a 1-form (the curl under G . dA)."""
    M, N, P = eta.M, eta.N, eta.P
    return Form2(simplify(diff(P, "y") - diff(N, "z")),
                 simplify(diff(M, "z") - diff(P, "x")),
                 simplify(diff(N, "x") - diff(M, "y")),
                 eta.box)


def d2(omega: Form2) -> Form3:
    """Exterior derivative of a 2-form (the divergence times dV)."""
    S, T, U = omega.S, omega.T, omega.U
    return Form3(simplify(diff(S, "x") + diff(T, "y") + diff(U, "z")),
                 omega.box)


def gradient(f: Form0) -> VectorField:
    """grad f = f_x i + f_y j + f_z k."""
    return VectorField(simplify(diff(f.f, "x")),
                       simplify(diff(f.f, "y")),
                       simplify(diff(f.f, "z")),
                       f.box)


def curl(field: VectorField) -> VectorField:
    """curl F, from the formal determinant with basis row i, j, k."""
    M, N, P = field.components
    return VectorField(simplify(diff(P, "y") - diff(N, "z")),
                       simplify(diff(M, "z") - diff(P, "x")),
                       simplify(diff(N, "x") - diff(M, "y")),
                       field.box)


def divergence(field: VectorField) -> Form0:
    """div G = S_x + T_y + U_z as a scalar function on the same box."""
    S, T, U = field.components
    return Form0(simplify(diff(S, "x") + diff(T, "y") + diff(U, "z")),
                 field.box)


def _scaled_sum(alpha: float, cu: Expression, beta: float, cv: Expression) -> Expression:
    """alpha*cu + beta*cv, written with subtraction for negative scalars so
    equal-and-opposite terms cancel structurally (negation is exact)."""
    a = Mul(Constant(abs(alpha)), cu)
    b = Mul(Constant(abs(beta)), cv)
    if alpha >= 0 and beta >= 0:
        combined = a + b
    elif alpha >= 0:
        combined = a - b
    elif beta >= 0:
        combined = b - a
    else:
        combined = Neg(a + b)
    return simplify(combined)


def linear_combine(alpha: float, u: KForm, beta: float, v: KForm) -> KForm:
    """Coefficientwise alpha*u + beta*v for two forms of the same degree."""
    if type(u) is not type(v):
        raise FormMismatchError(
            f"cannot combine degree {u.degree} with degree {v.degree}")
    if u.box != v.box:
        raise FormMismatchError("cannot combine forms on different boxes")
    combined = tuple(_scaled_sum(float(alpha), cu, float(beta), cv)
                     for cu, cv in zip(u.coefficients, v.coefficients))
    cls = type(u)
    return cls(*combined, u.box)
