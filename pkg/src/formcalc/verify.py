"""Numeric verification of the integral theorems.

Each verifier computes both sides of an identity by independent code
paths (derivative + chain integral on one side, boundary + pullback on
the other) and reports absolute and relative error.  The relative error
uses 1 + max(|lhs|, |rhs|) in the denominator so identities whose true
value is 0 are judged sensibly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .chains import Path, Region, Surface, path_boundary, region_boundary, surface_boundary
from .errors import NonPlanarSurfaceError
from .expr import Expression, Mul, Sub, as_expr, diff, evaluate, simplify, substitute
from .forms import Form0, Form1, Form2, d0, d1, d2
from .integrate import QuadConfig, composite_rule, integrate_path, integrate_surface, integrate_volume, tensor_rule

__all__ = [
    "VerifyReport", "DEFAULT_TOL", "verify_ftc", "verify_stokes",
    "verify_green", "verify_plane_divergence", "verify_gauss",
]

DEFAULT_TOL = 1e-6

_PLANAR_TOL = 1e-12


@dataclass(frozen=True)
class VerifyReport:
    """Both sides of a theorem identity plus error measures.

    ``passed`` is equivalent to ``rel_err <= tol`` where
    rel_err = abs_err / (1 + max(|lhs|, |rhs|)).
    """

    theorem: str
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    tol: float
    passed: bool
    config: QuadConfig
    diagnostics: dict = field(default_factory=dict)

    def json_dict(self) -> dict:
        """The stable JSON schema used by the CLI."""
        return {
            "theorem": self.theorem,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "pass": self.passed,
            "config": {
                "gauss_order": self.config.gauss_order,
                "subdivisions": self.config.subdivisions,
                "tol": self.tol,
            },
        }


def _report(theorem: str, lhs: float, rhs: float, tol: float,
            cfg: QuadConfig, diagnostics: dict) -> VerifyReport:
    abs_err = abs(lhs - rhs)
    rel_err = abs_err / (1.0 + max(abs(lhs), abs(rhs)))
    return VerifyReport(theorem=theorem, lhs=lhs, rhs=rhs, abs_err=abs_err,
                        rel_err=rel_err, tol=tol, passed=rel_err <= tol,
                        config=cfg, diagnostics=diagnostics)


def verify_ftc(f: Form0, path: Path, cfg: QuadConfig | None = None,
               tol: float = DEFAULT_TOL) -> VerifyReport:
    """Fundamental Theorem of Calculus: integral of df along the path
    against the signed sum of f at the endpoints."""
    cfg = cfg or QuadConfig()
    lhs = integrate_path(d0(f), path, cfg)
    endpoints = path_boundary(path)
    contributions = [
        weight * evaluate(f.f, {"x": p.x, "y": p.y, "z": p.z})
        for weight, p in endpoints
    ]
    rhs = float(np.add.reduce(np.asarray(contributions)))
    return _report("ftc", lhs, rhs, tol, cfg, {
        "endpoints": {"start": endpoints.start.as_tuple(),
                      "end": endpoints.end.as_tuple()},
        "endpoint_terms": contributions,
    })


def verify_stokes(eta: Form1, surface: Surface, cfg: QuadConfig | None = None,
                  tol: float = DEFAULT_TOL) -> VerifyReport:
    """Stokes: surface integral of d(eta) against the boundary circulation."""
    cfg = cfg or QuadConfig()
    lhs = integrate_surface(d1(eta), surface, cfg)
    edges = surface_boundary(surface)
    per_edge = [integrate_path(eta, edge, cfg) for edge in edges]
    rhs = float(np.add.reduce(np.asarray(per_edge)))
    return _report("stokes", lhs, rhs, tol, cfg, {"edge_integrals": per_edge})


# --- planar specializations ------------------------------------------------

def _require_planar(surface: Surface, cfg: QuadConfig):
    points, _ = tensor_rule(surface.bounds, cfg)
    program = kernels.compile_program([surface.z], surface.params)
    zs = kernels.eval_program(program, points)[0]
    worst = float(np.abs(zs).max()) if zs.size else 0.0
    if worst > _PLANAR_TOL:
        raise NonPlanarSurfaceError(
            f"surface is not in the z = 0 plane: |z| reaches {worst:.3g} "
            f"at a quadrature node")


def _planar_double_integral(integrand_xy: Expression, surface: Surface,
                            cfg: QuadConfig) -> float:
    """Integrate a function over a plane surface using the 2x2 Jacobian
    x_u y_v - x_v y_u.  The integrand may mention z, which is 0 on the
    surface, so all three maps are substituted."""
    u, v = surface.params
    xm, ym = surface.x, surface.y
    jac = Sub(Mul(simplify(diff(xm, u)), simplify(diff(ym, v))),
              Mul(simplify(diff(xm, v)), simplify(diff(ym, u))))
    composed = substitute(integrand_xy,
                          {"x": xm, "y": ym, "z": surface.z})
    integrand = simplify(Mul(composed, jac))
    points, weights = tensor_rule(surface.bounds, cfg)
    if points.shape[0] == 0:
        return 0.0
    values = kernels.eval_program(
        kernels.compile_program([integrand], (u, v)), points)[0]
    return surface.orientation * float(np.add.reduce(values * weights))


def _planar_line_integral(m: Expression, n: Expression, surface: Surface,
                          cfg: QuadConfig) -> tuple[float, list[float]]:
    """Sum of int [m dx + n dy] over the surface's boundary edges."""
    per_edge = []
    for edge in surface_boundary(surface):
        t = edge.param
        subs = {"x": edge.x, "y": edge.y, "z": edge.z}
        integrand = simplify(
            Mul(substitute(m, subs), diff(edge.x, t))
            + Mul(substitute(n, subs), diff(edge.y, t)))
        nodes, weights = composite_rule(*edge.interval, cfg)
        values = kernels.eval_program(
            kernels.compile_program([integrand], (t,)), nodes[:, None])[0]
        per_edge.append(edge.orientation * float(np.add.reduce(values * weights)))
    total = float(np.add.reduce(np.asarray(per_edge)))
    return total, per_edge


def verify_green(M, N, surface: Surface, cfg: QuadConfig | None = None,
                 tol: float = DEFAULT_TOL) -> VerifyReport:
    """Green: double integral of (N_x - M_y) against the circulation
    of M dx + N dy around the boundary.  The surface must lie in z = 0."""
    cfg = cfg or QuadConfig()
    M = as_expr(M)
    N = as_expr(N)
    _require_planar(surface, cfg)
    integrand = simplify(Sub(diff(N, "x"), diff(M, "y")))
    lhs = _planar_double_integral(integrand, surface, cfg)
    rhs, per_edge = _planar_line_integral(M, N, surface, cfg)
    return _report("green", lhs, rhs, tol, cfg, {"edge_integrals": per_edge})


def verify_plane_divergence(M, N, surface: Surface,
                            cfg: QuadConfig | None = None,
                            tol: float = DEFAULT_TOL) -> VerifyReport:
    """Divergence theorem in the plane: double integral of (M_x + N_y)
    against the flux integral of the orthogonal field -N dx + M dy."""
    cfg = cfg or QuadConfig()
    M = as_expr(M)
    N = as_expr(N)
    _require_planar(surface, cfg)
    integrand = simplify(diff(M, "x") + diff(N, "y"))
    lhs = _planar_double_integral(integrand, surface, cfg)
    rhs, per_edge = _planar_line_integral(simplify(-N), M, surface, cfg)
    return _report("plane-div", lhs, rhs, tol, cfg, {"edge_integrals": per_edge})


def verify_gauss(omega: Form2, region: Region, cfg: QuadConfig | None = None,
                 tol: float = DEFAULT_TOL) -> VerifyReport:
    """Gauss: volume integral of d(omega) against the total flux of omega
    through the region's six faces."""
    cfg = cfg or QuadConfig()
    lhs = integrate_volume(d2(omega), region, cfg)
    faces = region_boundary(region)
    per_face = [integrate_surface(omega, face, cfg) for face in faces]
    rhs = float(np.add.reduce(np.asarray(per_face)))
    return _report("gauss", lhs, rhs, tol, cfg, {"face_integrals": per_face})
