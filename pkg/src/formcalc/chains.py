"""Parameterized paths, surfaces and regions with oriented boundaries.

A chain is a continuously differentiable map from an interval, rectangle
or box of parameters into R^3, together with an orientation sign.
Induced boundary orientations follow the alternating rule
sum_i (-1)^(i-1) (top face - bottom face), with each face parameterized
by the remaining parameters in their declared order; in two dimensions
this is counterclockwise traversal of the parameter rectangle.  The
convention is pinned operationally by the theorem verifiers passing on
the identity square and cube.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EvaluationError
from .expr import (Constant, Expression, as_expr, diff, evaluate,
                   free_variables, simplify, substitute)
from .linalg import Matrix3Sym, Vec3, det3_sym

__all__ = [
    "Path", "Surface", "Region", "SignedEndpoints",
    "path_boundary", "surface_boundary", "region_boundary", "jacobian3",
]


def _check_maps(maps, params, what: str):
    allowed = set(params)
    for component, m in zip("xyz", maps):
        extra = free_variables(m) - allowed
        if extra:
            raise ValueError(
                f"{what} component {component} uses undeclared variables "
                f"{sorted(extra)}; parameters are {list(params)}")


def _check_bounds(bounds, what: str):
    for lo, hi in bounds:
        if not float(lo) < float(hi):
            raise ValueError(f"{what} bounds must be increasing, got [{lo}, {hi}]")


def _check_orientation(sign: int):
    if sign not in (1, -1):
        raise ValueError("orientation must be +1 or -1")


@dataclass(frozen=True)
class Path:
    """Map t -> (x(t), y(t), z(t)) on [a, b] with an orientation sign."""

    param: str
    x: Expression
    y: Expression
    z: Expression
    interval: tuple[float, float]
    orientation: int = 1

    def __post_init__(self):
        object.__setattr__(self, "x", as_expr(self.x))
        object.__setattr__(self, "y", as_expr(self.y))
        object.__setattr__(self, "z", as_expr(self.z))
        object.__setattr__(self, "interval",
                           (float(self.interval[0]), float(self.interval[1])))
        _check_maps(self.maps, (self.param,), "path")
        _check_bounds([self.interval], "path")
        _check_orientation(self.orientation)

    @property
    def maps(self) -> tuple[Expression, Expression, Expression]:
        return (self.x, self.y, self.z)

    def point_at(self, t: float) -> Vec3:
        b = {self.param: t}
        return Vec3(*(evaluate(m, b) for m in self.maps))


@dataclass(frozen=True)
class Surface:
    """Map (u, v) -> R^3 on a parameter rectangle with an orientation sign."""

    params: tuple[str, str]
    x: Expression
    y: Expression
    z: Expression
    bounds: tuple[tuple[float, float], tuple[float, float]]
    orientation: int = 1

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if len(self.params) != 2 or len(set(self.params)) != 2:
            raise ValueError("surface needs two distinct parameters")
        object.__setattr__(self, "x", as_expr(self.x))
        object.__setattr__(self, "y", as_expr(self.y))
        object.__setattr__(self, "z", as_expr(self.z))
        object.__setattr__(self, "bounds",
                           tuple((float(lo), float(hi)) for lo, hi in self.bounds))
        if len(self.bounds) != 2:
            raise ValueError("surface needs two parameter intervals")
        _check_maps(self.maps, self.params, "surface")
        _check_bounds(self.bounds, "surface")
        _check_orientation(self.orientation)

    @property
    def maps(self) -> tuple[Expression, Expression, Expression]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class Region:
    """Map (u, v, w) -> R^3 on a parameter box with an orientation sign."""

    params: tuple[str, str, str]
    x: Expression
    y: Expression
    z: Expression
    bounds: tuple[tuple[float, float], ...]
    orientation: int = 1

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if len(self.params) != 3 or len(set(self.params)) != 3:
            raise ValueError("region needs three distinct parameters")
        object.__setattr__(self, "x", as_expr(self.x))
        object.__setattr__(self, "y", as_expr(self.y))
        object.__setattr__(self, "z", as_expr(self.z))
        object.__setattr__(self, "bounds",
                           tuple((float(lo), float(hi)) for lo, hi in self.bounds))
        if len(self.bounds) != 3:
            raise ValueError("region needs three parameter intervals")
        _check_maps(self.maps, self.params, "region")
        _check_bounds(self.bounds, "region")
        _check_orientation(self.orientation)

    @property
    def maps(self) -> tuple[Expression, Expression, Expression]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class SignedEndpoints:
    """Boundary of a path: start with weight -1, end with weight +1."""

    start: Vec3
    end: Vec3

    def __iter__(self):
        return iter(((-1, self.start), (+1, self.end)))


def path_boundary(path: Path) -> SignedEndpoints:
    """Evaluate the map at both ends; orientation -1 swaps them."""
    a, b = path.interval
    try:
        start = path.point_at(a)
        end = path.point_at(b)
    except ValueError as exc:
        raise EvaluationError(f"non-finite path endpoint: {exc}") from None
    if path.orientation < 0:
        start, end = end, start
    return SignedEndpoints(start, end)


def _fix_param(maps, name: str, value: float):
    fixed = {name: Constant(value)}
    return tuple(simplify(substitute(m, fixed)) for m in maps)


def surface_boundary(surface: Surface) -> list[Path]:
    """The four parameter-rectangle edges as paths, counterclockwise.

    Returned in the order: u-edge at v=c (+), v-edge at u=b (+),
    u-edge at v=d (-), v-edge at u=a (-); the surface's own orientation
    multiplies all four signs.
    """
    (u, v) = surface.params
    (a, b), (c, d) = surface.bounds
    s = surface.orientation
    edges = []
    for moving, fixed_name, fixed_value, interval, sign in (
            (u, v, c, (a, b), +1),
            (v, u, b, (c, d), +1),
            (u, v, d, (a, b), -1),
            (v, u, a, (c, d), -1)):
        maps = _fix_param(surface.maps, fixed_name, fixed_value)
        edges.append(Path(moving, *maps, interval=interval, orientation=sign * s))
    return edges


def region_boundary(region: Region) -> list[Surface]:
    """The six parameter-box faces as surfaces with induced orientations.

    Face signs alternate by axis: (+ at u=b, - at u=a), (- at v=d,
    + at v=c), (+ at w=q, - at w=p); each face keeps the remaining two
    parameters in their declared order.  The region's orientation
    multiplies all six.
    """
    params = region.params
    bounds = region.bounds
    s = region.orientation
    faces = []
    for axis in range(3):
        rest = tuple(p for i, p in enumerate(params) if i != axis)
        rest_bounds = tuple(bb for i, bb in enumerate(bounds) if i != axis)
        lo, hi = bounds[axis]
        axis_sign = 1 if axis % 2 == 0 else -1
        for value, side_sign in ((hi, +1), (lo, -1)):
            maps = _fix_param(region.maps, params[axis], value)
            faces.append(Surface(rest, *maps, bounds=rest_bounds,
                                 orientation=axis_sign * side_sign * s))
    return faces


def jacobian3(region: Region) -> Expression:
    """Determinant of the rows d(x,y,z)/du, d(x,y,z)/dv, d(x,y,z)/dw."""
    rows = tuple(
        tuple(simplify(diff(m, p)) for m in region.maps)
        for p in region.params
    )
    return det3_sym(Matrix3Sym(rows))
