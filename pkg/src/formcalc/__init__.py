"""formcalc: differential forms on boxes in R^3.

Symbolic exterior derivatives (gradient, curl, divergence), constructive
scalar/vector potential recovery, and quadrature-based verification of
the Fundamental Theorem of Calculus and the Stokes, Green and Gauss
theorems.  Hot evaluation loops run on a compiled extension when built,
with a pure-numpy fallback selected automatically at import.
"""

from .chains import (Path, Region, SignedEndpoints, Surface, jacobian3,
                     path_boundary, region_boundary, surface_boundary)
from .errors import (EvaluationError, FormcalcError, FormMismatchError,
                     NonPlanarSurfaceError, OutOfDomainError, ParseError,
                     PotentialExistenceError, UnboundVariableError)
from .expr import (Bindings, Call, Constant, Expression, Variable,
                   ZeroTestConfig, as_expr, diff, evaluate, free_variables,
                   is_numerically_zero, parse_expr, simplify, substitute,
                   to_string, zero_residual)
from .forms import (DomainBox, Form0, Form1, Form2, Form3, VectorField,
                    curl, d0, d1, d2, divergence, gradient, linear_combine)
from .integrate import (QuadConfig, integrate_path, integrate_surface,
                        integrate_volume, quad_1d)
from .kernels import active_backend, available_backends, compile_program, eval_program
from .linalg import Matrix3Sym, Vec3, cross, det3_num, det3_sym, dot
from .reconstruct import (BasePoint, ScalarPotential, VectorPotential,
                          finite_difference_curl, finite_difference_gradient,
                          scalar_potential, vector_potential)
from .verify import (DEFAULT_TOL, VerifyReport, verify_ftc, verify_gauss,
                     verify_green, verify_plane_divergence, verify_stokes)

__version__ = "0.1.0"

__all__ = [
    "Bindings", "Call", "Constant", "Expression", "Variable",
    "ZeroTestConfig", "as_expr", "diff", "evaluate", "free_variables",
    "is_numerically_zero", "parse_expr", "simplify", "substitute",
    "to_string", "zero_residual",
    "Vec3", "Matrix3Sym", "cross", "dot", "det3_num", "det3_sym",
    "DomainBox", "Form0", "Form1", "Form2", "Form3", "VectorField",
    "d0", "d1", "d2", "gradient", "curl", "divergence", "linear_combine",
    "Path", "Surface", "Region", "SignedEndpoints", "path_boundary",
    "surface_boundary", "region_boundary", "jacobian3",
    "QuadConfig", "quad_1d", "integrate_path", "integrate_surface",
    "integrate_volume",
    "BasePoint", "ScalarPotential", "VectorPotential", "scalar_potential",
    "vector_potential", "finite_difference_gradient", "finite_difference_curl",
    "VerifyReport", "DEFAULT_TOL", "verify_ftc", "verify_stokes",
    "verify_green", "verify_plane_divergence", "verify_gauss",
    "active_backend", "available_backends", "compile_program", "eval_program",
    "FormcalcError", "ParseError", "EvaluationError", "UnboundVariableError",
    "FormMismatchError", "OutOfDomainError", "NonPlanarSurfaceError",
    "PotentialExistenceError",
]
