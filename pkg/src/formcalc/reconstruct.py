"""Constructive potential recovery on a box.

Scalar potentials are built as f = u + v + w from one-dimensional
integrals of the field components, with the inner partial derivatives
taken symbolically on the integrands (differentiation under the integral
sign) and the resulting nested integrals flattened into tensor-product
quadratures:

    u = int_{x0}^{x} M(s, y, z) ds
    v = int_{y0}^{y} N(x, t, z) dt - int int M_y(s, t, z) ds dt
    w = int_{z0}^{z} P(x, y, q) dq - int int M_z(s, y, q) ds dq
        - int int N_z(x, t, q) dt dq + int int int M_yz(s, t, q) ds dt dq

Vector potentials use the gauge with vanishing third component:

    M = int_{z0}^{z} T(x, y, q) dq - int_{y0}^{y} U(x, t, z0) dt
    N = -int_{z0}^{z} S(x, y, q) dq
    P = 0

Construction refuses fields that fail the corresponding zero condition
(curl for scalar potentials, divergence for vector potentials), since no
potential exists then.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EvaluationError, OutOfDomainError, PotentialExistenceError
from .expr import (Constant, Expression, ZeroTestConfig, diff, evaluate,
                   simplify, substitute, to_string, zero_residual)
from .forms import DomainBox, VectorField, curl, divergence
from .integrate import QuadConfig, composite_rule

__all__ = [
    "BasePoint", "ScalarPotential", "VectorPotential",
    "scalar_potential", "vector_potential",
    "finite_difference_gradient", "finite_difference_curl",
    "DEFAULT_FD_STEP",
]

# Central-difference step paired with potential_tol=1e-5: truncation
# O(h^2) stays well under the tolerance while quadrature noise (~1e-9)
# stays under the h-scaled roundoff floor.
DEFAULT_FD_STEP = 1e-4


@dataclass(frozen=True)
class BasePoint:
    """Fixed reference point for the integral constructions."""

    x: float
    y: float
    z: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (float(self.x), float(self.y), float(self.z))


def _as_base(point) -> BasePoint:
    if isinstance(point, BasePoint):
        return point
    x, y, z = point
    return BasePoint(float(x), float(y), float(z))


def _require_interior(base: BasePoint, box: DomainBox):
    for axis, value, (lo, hi) in zip("xyz", base.as_tuple(), box.bounds):
        if not lo < value < hi:
            raise ValueError(
                f"base point must be strictly interior to the box; "
                f"{axis} = {value} is outside ({lo}, {hi})")


def _require_in_box(point, box: DomainBox, what: str):
    if not box.contains_point(point):
        raise OutOfDomainError(f"{what} {tuple(point)} is outside the box")


def _require_zero(expression: Expression, box: DomainBox, cfg: QuadConfig,
                  label: str):
    result = zero_residual(expression, box, ZeroTestConfig(tol=cfg.zero_tol))
    if not result.is_zero:
        raise PotentialExistenceError(
            f"{label} is not numerically zero, so no potential exists: "
            f"max |{to_string(expression)}| = {result.max_abs:.6g} at "
            f"{result.worst_point} (threshold {result.threshold:.6g})",
            residual=result.max_abs,
            worst_point=result.worst_point,
        )


class ScalarPotential:
    """Callable scalar potential; value at the base point is 0.

    Instances are built by :func:`scalar_potential`.  Evaluation is
    on-demand quadrature; results are memoized per query point behind a
    lock, so instances are safe to share between threads.
    """

    def __init__(self, field: VectorField, base: BasePoint, box: DomainBox,
                 cfg: QuadConfig):
        self.base = base
        self.box = box
        self.config = cfg
        M, N, P = field.components
        coords = ("x", "y", "z")
        My = simplify(diff(M, "y"))
        self._exprs = {
            "M": M, "N": N, "P": P,
            "My": My,
            "Mz": simplify(diff(M, "z")),
            "Nz": simplify(diff(N, "z")),
            "Myz": simplify(diff(My, "z")),
        }
        self._programs = {
            name: kernels.compile_program([e], coords)
            for name, e in self._exprs.items()
        }
        self._cache: dict[tuple[float, float, float], float] = {}
        self._lock = threading.Lock()

    def __call__(self, x: float, y: float, z: float) -> float:
        return self.at((x, y, z))

    def at(self, point) -> float:
        key = (float(point[0]), float(point[1]), float(point[2]))
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        _require_in_box(key, self.box, "query point")
        value = self._compute(key)
        with self._lock:
            self._cache[key] = value
        return value

    def _tensor(self, name: str, spans: dict[int, tuple[float, float]],
                fixed: dict[int, float]) -> float:
        """Tensor-product integral of one integrand program; axes not in
        ``spans`` are pinned to the query coordinates."""
        axes = sorted(spans)
        rules = [composite_rule(lo, hi, self.config) for lo, hi in
                 (spans[a] for a in axes)]
        if any(nodes.size == 0 for nodes, _ in rules):
            return 0.0
        shape = tuple(nodes.size for nodes, _ in rules)
        points = np.empty(shape + (3,))
        for axis, value in fixed.items():
            points[..., axis] = value
        for i, (axis, (nodes, _)) in enumerate(zip(axes, rules)):
            view = [None] * len(axes)
            view[i] = slice(None)
            points[..., axis] = nodes[tuple(view)]
        points = points.reshape(-1, 3)
        values = kernels.eval_program(self._programs[name], points)[0]
        if not np.isfinite(values).all():
            bad = int(np.nonzero(~np.isfinite(values))[0][0])
            bindings = dict(zip("xyz", points[bad]))
            evaluate(self._exprs[name], bindings)  # raises with the subexpression
            raise EvaluationError(f"non-finite integrand at {bindings}")
        weights = rules[0][1]
        for _, w in rules[1:]:
            weights = np.multiply.outer(weights, w)
        return float(np.add.reduce(values * weights.ravel()))

    def _compute(self, point: tuple[float, float, float]) -> float:
        x, y, z = point
        x0, y0, z0 = self.base.as_tuple()
        span_x, span_y, span_z = (x0, x), (y0, y), (z0, z)
        u = self._tensor("M", {0: span_x}, {1: y, 2: z})
        v = (self._tensor("N", {1: span_y}, {0: x, 2: z})
             - self._tensor("My", {0: span_x, 1: span_y}, {2: z}))
        w = (self._tensor("P", {2: span_z}, {0: x, 1: y})
             - self._tensor("Mz", {0: span_x, 2: span_z}, {1: y})
             - self._tensor("Nz", {1: span_y, 2: span_z}, {0: x})
             + self._tensor("Myz", {0: span_x, 1: span_y, 2: span_z}, {}))
        return u + v + w


class VectorPotential:
    """Vector potential (M, N, P) with P identically zero.

    Component callables are exposed as ``.M``, ``.N`` and ``.P``; each
    takes (x, y, z).  Built by :func:`vector_potential`.
    """

    def __init__(self, field: VectorField, base: BasePoint, box: DomainBox,
                 cfg: QuadConfig):
        self.base = base
        self.box = box
        self.config = cfg
        S, T, U = field.components
        coords = ("x", "y", "z")
        z0 = base.z
        U_at_z0 = simplify(substitute(U, {"z": Constant(z0)}))
        self._prog_S = kernels.compile_program([S], coords)
        self._prog_T = kernels.compile_program([T], coords)
        self._prog_U0 = kernels.compile_program([U_at_z0], coords)

    def _line(self, program, axis: int, lo: float, hi: float,
              fixed: dict[int, float]) -> float:
        nodes, weights = composite_rule(lo, hi, self.config)
        if nodes.size == 0:
            return 0.0
        points = np.empty((nodes.size, 3))
        for ax, value in fixed.items():
            points[:, ax] = value
        points[:, axis] = nodes
        values = kernels.eval_program(program, points)[0]
        if not np.isfinite(values).all():
            raise EvaluationError(
                "non-finite integrand while evaluating the vector potential")
        return float(np.add.reduce(values * weights))

    def M(self, x: float, y: float, z: float) -> float:
        _require_in_box((x, y, z), self.box, "query point")
        y0, z0 = self.base.y, self.base.z
        along_z = self._line(self._prog_T, 2, z0, z, {0: x, 1: y})
        along_y = self._line(self._prog_U0, 1, y0, y, {0: x, 2: z0})
        return along_z - along_y

    def N(self, x: float, y: float, z: float) -> float:
        _require_in_box((x, y, z), self.box, "query point")
        z0 = self.base.z
        return -self._line(self._prog_S, 2, z0, z, {0: x, 1: y})

    def P(self, x: float, y: float, z: float) -> float:
        _require_in_box((x, y, z), self.box, "query point")
        return 0.0

    @property
    def components(self):
        return (self.M, self.N, self.P)


def scalar_potential(field: VectorField, base, box: DomainBox,
                     cfg: QuadConfig | None = None) -> ScalarPotential:
    """Build f with grad f = field and f(base) = 0.

    Requires curl(field) to pass the numeric zero test on the box
    (otherwise no scalar potential exists) and the base point to be
    strictly interior.
    """
    cfg = cfg or QuadConfig()
    base = _as_base(base)
    _require_interior(base, box)
    rotation = curl(field)
    for label, component in zip(("(curl F)_x", "(curl F)_y", "(curl F)_z"),
                                rotation.components):
        _require_zero(component, box, cfg, label)
    return ScalarPotential(field, base, box, cfg)


def vector_potential(field: VectorField, base, box: DomainBox,
                     cfg: QuadConfig | None = None) -> VectorPotential:
    """Build (M, N, 0) with curl (M, N, 0) = field.

    Requires divergence(field) to pass the numeric zero test on the box
    (otherwise no vector potential exists).
    """
    cfg = cfg or QuadConfig()
    base = _as_base(base)
    _require_interior(base, box)
    _require_zero(divergence(field).f, box, cfg, "div G")
    return VectorPotential(field, base, box, cfg)


def _fd_partial(fn, point, axis: int, h: float, box: DomainBox | None) -> float:
    """Second-order finite-difference partial derivative.

    Uses the central stencil when the points fit inside the box and a
    one-sided three-point stencil (still O(h^2)) at a boundary, so
    residual checks work at user-given points on a box face.
    """
    p = [float(c) for c in point]
    lo, hi = (box.bounds[axis] if box is not None
              else (-math.inf, math.inf))

    def at(offset: float) -> float:
        shifted = list(p)
        shifted[axis] += offset
        return fn(*shifted)

    if p[axis] - h >= lo and p[axis] + h <= hi:
        return (at(h) - at(-h)) / (2.0 * h)
    if p[axis] + 2 * h <= hi:
        return (-3.0 * at(0.0) + 4.0 * at(h) - at(2 * h)) / (2.0 * h)
    if p[axis] - 2 * h >= lo:
        return (3.0 * at(0.0) - 4.0 * at(-h) + at(-2 * h)) / (2.0 * h)
    raise OutOfDomainError(
        f"no finite-difference stencil of step {h} fits inside the box "
        f"around axis {axis} of {tuple(p)}")


def finite_difference_gradient(fn, point, h: float = DEFAULT_FD_STEP,
                               box: DomainBox | None = None):
    """Finite-difference gradient of a scalar callable fn(x, y, z).

    Central differences in the interior; one-sided second-order stencils
    next to the faces of ``box`` when given.
    """
    return tuple(_fd_partial(fn, point, axis, h, box) for axis in range(3))


def finite_difference_curl(m, n, p, point, h: float = DEFAULT_FD_STEP,
                           box: DomainBox | None = None):
    """Finite-difference curl of component callables (m, n, p)(x, y, z)."""
    def partial(fn, axis):
        return _fd_partial(fn, point, axis, h, box)

    return (partial(p, 1) - partial(n, 2),
            partial(m, 2) - partial(p, 0),
            partial(n, 0) - partial(m, 1))
