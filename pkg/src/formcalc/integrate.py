"""Composite Gauss-Legendre quadrature and pullback integrals over chains.

Chain integrals are computed by substituting the component maps into the
form coefficients symbolically (derivatives of the maps are taken
symbolically too), compiling the resulting parameter-space integrand
once, and evaluating it on a tensor-product grid.  Summation order is
fixed (subinterval-major, node-minor, pairwise reduction) so results are
reproducible bit-for-bit on a given build.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .chains import Path, Region, Surface, jacobian3
from .errors import EvaluationError, OutOfDomainError
from .expr import Expression, Mul, diff, evaluate, simplify, substitute
from .forms import DomainBox, Form1, Form2, Form3
from .linalg import Matrix3Sym, det3_sym

__all__ = [
    "QuadConfig", "quad_1d", "integrate_path", "integrate_surface",
    "integrate_volume", "composite_rule", "tensor_rule",
]

_COORDS = ("x", "y", "z")


@dataclass(frozen=True)
class QuadConfig:
    """Quadrature order, subdivisions per axis, and tolerances for all
    numeric integrals."""

    gauss_order: int = 8
    subdivisions: int = 16
    potential_tol: float = 1e-5
    zero_tol: float = 1e-9

    def __post_init__(self):
        if self.gauss_order < 2:
            raise ValueError("gauss_order must be >= 2")
        if self.subdivisions < 1:
            raise ValueError("subdivisions must be >= 1")


_gauss_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_reference(order: int) -> tuple[np.ndarray, np.ndarray]:
    cached = _gauss_cache.get(order)
    if cached is None:
        cached = np.polynomial.legendre.leggauss(order)
        _gauss_cache[order] = cached
    return cached


def composite_rule(a: float, b: float, cfg: QuadConfig) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the composite rule on [a, b], subinterval-major.

    a == b yields empty arrays (the integral is exactly 0); b < a yields
    the signed rule.
    """
    if a == b:
        return np.empty(0), np.empty(0)
    x, w = _gauss_reference(cfg.gauss_order)
    edges = np.linspace(a, b, cfg.subdivisions + 1)
    half = (edges[1:] - edges[:-1]) / 2.0
    mid = (edges[1:] + edges[:-1]) / 2.0
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def tensor_rule(intervals: Sequence[tuple[float, float]],
                cfg: QuadConfig) -> tuple[np.ndarray, np.ndarray]:
    """Tensor-product rule over a parameter box: points (n, k), weights (n,)."""
    axes = [composite_rule(lo, hi, cfg) for lo, hi in intervals]
    if any(n.size == 0 for n, _ in axes):
        return np.empty((0, len(axes))), np.empty(0)
    k = len(axes)
    shape = tuple(nodes.size for nodes, _ in axes)
    points = np.empty(shape + (k,))
    for i, (nodes, _) in enumerate(axes):
        view = [None] * k
        view[i] = slice(None)
        points[..., i] = nodes[tuple(view)]
    weights = axes[0][1]
    for _, w in axes[1:]:
        weights = np.multiply.outer(weights, w)
    return points.reshape(-1, k), np.ascontiguousarray(weights.ravel())


def _reduce(values: np.ndarray, weights: np.ndarray) -> float:
    # np.add.reduce performs pairwise summation on contiguous doubles
    return float(np.add.reduce(values * weights))


def quad_1d(fn: Callable[[float], float], a: float, b: float,
            cfg: QuadConfig | None = None) -> float:
    """Composite Gauss-Legendre estimate of the integral of fn over [a, b].

    Exact to roundoff for polynomials of degree <= 2*gauss_order - 1 on
    each subinterval.  Raises EvaluationError on a non-finite sample.
    """
    cfg = cfg or QuadConfig()
    nodes, weights = composite_rule(a, b, cfg)
    if nodes.size == 0:
        return 0.0
    values = np.empty(nodes.size)
    for i, t in enumerate(nodes):
        t = float(t)
        try:
            values[i] = fn(t)
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            raise EvaluationError(f"non-finite sample at t = {t}: {exc}") from None
        if not np.isfinite(values[i]):
            raise EvaluationError(f"non-finite sample at t = {t}")
    return _reduce(values, weights)


def _composed(expression: Expression, maps) -> Expression:
    return substitute(expression, dict(zip(_COORDS, maps)))


def _raise_at(integrand: Expression, params: Sequence[str], point: np.ndarray,
              context: str):
    """Re-run the tree evaluator at the failing node for a precise error."""
    bindings = dict(zip(params, (float(c) for c in point)))
    evaluate(integrand, bindings)  # expected to raise with the subexpression
    raise EvaluationError(f"non-finite {context} integrand at {bindings}")


def _check_values(values: np.ndarray, integrand: Expression,
                  params: Sequence[str], points: np.ndarray, context: str):
    bad = np.nonzero(~np.isfinite(values))[0]
    if bad.size:
        _raise_at(integrand, params, points[bad[0]], context)


def _check_image(box: DomainBox, image: np.ndarray, points: np.ndarray,
                 params: Sequence[str], context: str):
    escape = box.first_escape(image)
    if escape is not None:
        idx, axis = escape
        where = dict(zip(params, (float(c) for c in points[idx])))
        point = tuple(float(c) for c in image[idx])
        raise OutOfDomainError(
            f"{context} image leaves the form's box on the {axis} axis at "
            f"parameter {where}: point {point}")


def _chain_integral(coefficient_expr: Expression, chain_maps, params,
                    intervals, orientation: int, box: DomainBox,
                    cfg: QuadConfig, context: str) -> float:
    """Shared core: integrate a composed integrand over the parameter grid,
    checking that the chain image stays inside the form's box."""
    integrand = simplify(coefficient_expr)
    points, weights = tensor_rule(intervals, cfg)
    if points.shape[0] == 0:
        return 0.0
    program = kernels.compile_program([*chain_maps, integrand], params)
    values = kernels.eval_program(program, points)
    image = np.ascontiguousarray(values[:3].T)
    _check_image(box, image, points, params, context)
    _check_values(values[3], integrand, params, points, context)
    return orientation * _reduce(values[3], weights)


def integrate_path(eta: Form1, path: Path, cfg: QuadConfig | None = None) -> float:
    """Path integral: pull back M dx + N dy + P dz along the map and
    integrate [M x'(t) + N y'(t) + P z'(t)] dt."""
    cfg = cfg or QuadConfig()
    t = path.param
    maps = path.maps
    velocity = tuple(diff(m, t) for m in maps)
    terms = [Mul(_composed(c, maps), v) for c, v in zip(eta.coefficients, velocity)]
    integrand = terms[0] + terms[1] + terms[2]
    return _chain_integral(integrand, maps, (t,), (path.interval,),
                           path.orientation, eta.box, cfg, "path")


def integrate_surface(omega: Form2, surface: Surface,
                      cfg: QuadConfig | None = None) -> float:
    """Surface integral via the determinant with first row (S, T, U)
    composed with the map and the rows of map partials."""
    cfg = cfg or QuadConfig()
    u, v = surface.params
    maps = surface.maps
    matrix = Matrix3Sym((
        tuple(_composed(c, maps) for c in omega.coefficients),
        tuple(simplify(diff(m, u)) for m in maps),
        tuple(simplify(diff(m, v)) for m in maps),
    ))
    return _chain_integral(det3_sym(matrix), maps, (u, v), surface.bounds,
                           surface.orientation, omega.box, cfg, "surface")


def integrate_volume(nu: Form3, region: Region,
                     cfg: QuadConfig | None = None) -> float:
    """Volume integral of g(r(u,v,w)) times the Jacobian determinant."""
    cfg = cfg or QuadConfig()
    integrand = Mul(_composed(nu.g, region.maps), jacobian3(region))
    return _chain_integral(integrand, region.maps, region.params,
                           region.bounds, region.orientation, nu.box, cfg,
                           "volume")
