"""Command-line frontend.

Subcommands: d, grad, curl, div, potential, integrate, verify,
sample-field, det.  Chains are declared inline with repeated flags
(--param, --x/--y/--z, --from/--to) or through a JSON job file (--job);
job-file values win over flags.  ``pi`` is accepted as a literal in
expressions, bounds and box coordinates.

Exit codes: 0 success / verification pass, 1 verification fail or
zero-condition rejection, 2 usage or parse error, 3 numeric
(non-finite) error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import kernels
from .chains import Path, Region, Surface
from .errors import (EvaluationError, FormMismatchError, NonPlanarSurfaceError,
                     OutOfDomainError, ParseError, PotentialExistenceError,
                     UnboundVariableError)
from .expr import (Call, Constant, Expression, Variable, as_expr, evaluate,
                   parse_expr, simplify, to_string)
from .forms import (DomainBox, Form0, Form1, Form2, Form3, VectorField, curl,
                    d0, d1, d2, divergence, gradient)
from .integrate import QuadConfig, integrate_path, integrate_surface, integrate_volume
from .linalg import Matrix3Sym, det3_num, det3_sym
from .reconstruct import (finite_difference_curl,
                          finite_difference_gradient, scalar_potential,
                          vector_potential)
from .verify import (DEFAULT_TOL, verify_ftc, verify_gauss, verify_green,
                     verify_plane_divergence, verify_stokes)

# Effectively unconstrained box for purely symbolic commands and for
# integrals whose form the user did not restrict.
_BIG = 1e9
_BIG_BOX = ((-_BIG, _BIG), (-_BIG, _BIG), (-_BIG, _BIG))
_UNIT_BOX = ((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0))


class _UsageError(Exception):
    pass


def _number(value) -> float:
    """A float from a number or an expression string (pi allowed)."""
    if isinstance(value, (int, float)):
        return float(value)
    return evaluate(parse_expr(str(value)), {})


def _floats(text: str, n: int, what: str) -> list[float]:
    parts = [p for p in str(text).split(",") if p.strip()]
    if len(parts) != n:
        raise _UsageError(f"{what} needs {n} comma-separated values, got {len(parts)}")
    return [_number(p) for p in parts]


def _coeff_str(e: Expression) -> str:
    text = to_string(e)
    if isinstance(e, (Variable, Call)) or (isinstance(e, Constant) and e.value >= 0):
        return text
    return f"({text})"


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _want_json(args, job) -> bool:
    return job.get("output") == "json" or args.json


# ---------------------------------------------------------------------------
# job file and shared option plumbing


def _load_job(args) -> dict:
    if not getattr(args, "job", None):
        return {}
    with open(args.job, "r", encoding="utf-8") as fh:
        try:
            job = json.load(fh)
        except json.JSONDecodeError as exc:
            raise _UsageError(f"invalid job file {args.job}: {exc}") from None
    if not isinstance(job, dict):
        raise _UsageError("job file must contain a JSON object")
    operation = job.get("operation")
    if operation is not None and operation != args.command:
        raise _UsageError(
            f"job file is for operation {operation!r} but the "
            f"{args.command!r} subcommand was invoked")
    return job


def _pick(job: dict, key: str, cli_value, default=None):
    if key in job:
        return job[key]
    if cli_value is not None:
        return cli_value
    return default


def _quad_config(args, job, potential_tol=None) -> QuadConfig:
    config = job.get("config", {})
    if not isinstance(config, dict):
        raise _UsageError("job 'config' must be an object")
    order = _pick(config, "order", args.order, 8)
    subdiv = _pick(config, "subdiv", args.subdiv, 16)
    zero_tol = _pick(config, "zero_tol", args.zero_tol, 1e-9)
    ptol = potential_tol if potential_tol is not None else 1e-5
    return QuadConfig(gauss_order=int(order), subdivisions=int(subdiv),
                      potential_tol=float(ptol), zero_tol=float(zero_tol))


def _box(args, job, default=_BIG_BOX) -> DomainBox:
    raw = _pick(job, "box", getattr(args, "box", None))
    if raw is None:
        (x, y, z) = default
        return DomainBox(x, y, z)
    if isinstance(raw, str):
        values = _floats(raw, 6, "--box")
    else:
        flat = []
        for entry in raw:
            flat.extend(entry if isinstance(entry, (list, tuple)) else [entry])
        if len(flat) != 6:
            raise _UsageError("job 'box' needs six bounds")
        values = [_number(v) for v in flat]
    return DomainBox((values[0], values[1]), (values[2], values[3]),
                     (values[4], values[5]))


def _coefficients(args, job, names: tuple[str, ...], what: str) -> list[Expression]:
    exprs = []
    for name in names:
        raw = _pick(job, name, getattr(args, f"c{name}", None))
        if raw is None:
            raise _UsageError(f"{what} requires -{name}")
        exprs.append(as_expr(str(raw)))
    return exprs


def _chain_options(args, job, arity: int, what: str):
    chain = job.get("chain")
    if chain is not None:
        params = [str(p) for p in chain.get("params", [])]
        maps = [str(chain.get(c, "")) for c in ("x", "y", "z")]
        bounds = [(_number(lo), _number(hi)) for lo, hi in chain.get("bounds", [])]
        orientation = int(chain.get("orientation", 1))
    else:
        params = list(args.params or [])
        maps = [args.map_x, args.map_y, args.map_z]
        lowers = args.lowers or []
        uppers = args.uppers or []
        if len(lowers) != len(params) or len(uppers) != len(params):
            raise _UsageError(
                f"{what} needs one --from and one --to per --param")
        bounds = [(_number(lo), _number(hi)) for lo, hi in zip(lowers, uppers)]
        orientation = args.orientation if args.orientation is not None else 1
    if len(params) != arity:
        raise _UsageError(f"{what} needs exactly {arity} parameter(s), got {len(params)}")
    if any(m in (None, "") for m in maps):
        raise _UsageError(f"{what} needs --x, --y and --z component maps")
    return params, maps, bounds, orientation


def _build_path(args, job) -> Path:
    params, maps, bounds, orientation = _chain_options(args, job, 1, "a path")
    return Path(params[0], *maps, interval=bounds[0], orientation=orientation)


def _build_surface(args, job) -> Surface:
    params, maps, bounds, orientation = _chain_options(args, job, 2, "a surface")
    return Surface(tuple(params), *maps, bounds=tuple(bounds),
                   orientation=orientation)


def _build_region(args, job) -> Region:
    params, maps, bounds, orientation = _chain_options(args, job, 3, "a region")
    return Region(tuple(params), *maps, bounds=tuple(bounds),
                  orientation=orientation)


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_d(args, job) -> int:
    k = int(_pick(job, "k", args.k, -1))
    box = _box(args, job)
    if k == 0:
        (f,) = _coefficients(args, job, ("f",), "d --k 0")
        result = d0(Form0(f, box))
        coeffs = dict(zip(("dx", "dy", "dz"), result.coefficients))
    elif k == 1:
        M, N, P = _coefficients(args, job, ("M", "N", "P"), "d --k 1")
        result = d1(Form1(M, N, P, box))
        coeffs = dict(zip(("dy dz", "dx dz", "dx dy"), result.coefficients))
    elif k == 2:
        S, T, U = _coefficients(args, job, ("S", "T", "U"), "d --k 2")
        result = d2(Form2(S, T, U, box))
        coeffs = {"dx dy dz": result.g}
    else:
        raise _UsageError("d requires --k 0, 1 or 2")
    if _want_json(args, job):
        _print_json({"operation": "d", "k": k,
                     "coefficients": {basis: to_string(e)
                                      for basis, e in coeffs.items()}})
    else:
        print(" + ".join(f"{_coeff_str(e)} {basis}" for basis, e in coeffs.items()))
    return 0


def _field_command(args, job, op: str) -> int:
    box = _box(args, job)
    if op == "grad":
        (f,) = _coefficients(args, job, ("f",), "grad")
        field = gradient(Form0(f, box))
        parts = dict(zip("ijk", field.components))
    elif op == "curl":
        M, N, P = _coefficients(args, job, ("M", "N", "P"), "curl")
        field = curl(VectorField(M, N, P, box))
        parts = dict(zip("ijk", field.components))
    else:
        S, T, U = _coefficients(args, job, ("S", "T", "U"), "div")
        parts = {"scalar": divergence(VectorField(S, T, U, box)).f}
    if _want_json(args, job):
        _print_json({"operation": op,
                     "components": {k: to_string(e) for k, e in parts.items()}})
    elif op == "div":
        print(to_string(parts["scalar"]))
    else:
        print(" + ".join(f"{_coeff_str(e)} {basis}" for basis, e in parts.items()))
    return 0


def cmd_grad(args, job) -> int:
    return _field_command(args, job, "grad")


def cmd_curl(args, job) -> int:
    return _field_command(args, job, "curl")


def cmd_div(args, job) -> int:
    return _field_command(args, job, "div")


def cmd_integrate(args, job) -> int:
    kind = _pick(job, "kind", args.kind)
    cfg = _quad_config(args, job)
    box = _box(args, job)
    if kind == "path":
        M, N, P = _coefficients(args, job, ("M", "N", "P"), "integrate path")
        value = integrate_path(Form1(M, N, P, box), _build_path(args, job), cfg)
    elif kind == "surface":
        S, T, U = _coefficients(args, job, ("S", "T", "U"), "integrate surface")
        value = integrate_surface(Form2(S, T, U, box), _build_surface(args, job), cfg)
    elif kind == "volume":
        (g,) = _coefficients(args, job, ("f",), "integrate volume")
        value = integrate_volume(Form3(g, box), _build_region(args, job), cfg)
    else:
        raise _UsageError("integrate kind must be path, surface or volume")
    if _want_json(args, job):
        _print_json({"operation": "integrate", "kind": kind, "value": value})
    else:
        print(f"{value:.17g}")
    return 0


def cmd_verify(args, job) -> int:
    theorem = _pick(job, "theorem", args.theorem)
    tol = float(_pick(job.get("config", {}), "tol", args.tol, DEFAULT_TOL))
    cfg = _quad_config(args, job)
    box = _box(args, job)
    if theorem == "ftc":
        (f,) = _coefficients(args, job, ("f",), "verify ftc")
        report = verify_ftc(Form0(f, box), _build_path(args, job), cfg, tol)
    elif theorem == "stokes":
        M, N, P = _coefficients(args, job, ("M", "N", "P"), "verify stokes")
        report = verify_stokes(Form1(M, N, P, box), _build_surface(args, job),
                               cfg, tol)
    elif theorem == "green":
        M, N = _coefficients(args, job, ("M", "N"), "verify green")
        report = verify_green(M, N, _build_surface(args, job), cfg, tol)
    elif theorem == "plane-div":
        M, N = _coefficients(args, job, ("M", "N"), "verify plane-div")
        report = verify_plane_divergence(M, N, _build_surface(args, job), cfg, tol)
    elif theorem == "gauss":
        S, T, U = _coefficients(args, job, ("S", "T", "U"), "verify gauss")
        report = verify_gauss(Form2(S, T, U, box), _build_region(args, job),
                              cfg, tol)
    else:
        raise _UsageError(
            "verify theorem must be ftc, stokes, green, plane-div or gauss")
    if _want_json(args, job):
        _print_json(report.json_dict())
    else:
        print(f"theorem={report.theorem} pass={report.passed} "
              f"lhs={report.lhs:.17g} rhs={report.rhs:.17g} "
              f"abs_err={report.abs_err:.3g} rel_err={report.rel_err:.3g} "
              f"tol={report.tol:g}")
        for key, values in report.diagnostics.items():
            if isinstance(values, list):
                rendered = ", ".join(f"{v:.12g}" for v in values)
                print(f"  {key}: {rendered}")
    return 0 if report.passed else 1


def _halton_interior(box: DomainBox, count: int) -> list[tuple[float, float, float]]:
    from scipy.stats import qmc

    sampler = qmc.Halton(d=3, scramble=False)
    sampler.fast_forward(1)
    unit = sampler.random(count)
    points = []
    for row in unit:
        # keep an interior margin so finite differences stay inside the box
        point = tuple(lo + (0.05 + 0.9 * t) * (hi - lo)
                      for t, (lo, hi) in zip(row, box.bounds))
        points.append(point)
    return points


def cmd_potential(args, job) -> int:
    kind = _pick(job, "kind", args.kind)
    ptol = _pick(job.get("config", {}), "tol", args.tol, 1e-5)
    cfg = _quad_config(args, job, potential_tol=float(ptol))
    box = _box(args, job, default=_UNIT_BOX)
    base_raw = _pick(job, "base", args.base)
    if base_raw is None:
        base = tuple((lo + hi) / 2.0 for lo, hi in box.bounds)
    elif isinstance(base_raw, str):
        base = tuple(_floats(base_raw, 3, "--base"))
    else:
        base = tuple(_number(v) for v in base_raw)
    raw_points = _pick(job, "points", args.at)
    if raw_points:
        points = [tuple(_floats(p, 3, "--at")) if isinstance(p, str)
                  else tuple(_number(v) for v in p)
                  for p in raw_points]
    else:
        points = _halton_interior(box, 8)

    rows = []
    if kind == "scalar":
        M, N, P = _coefficients(args, job, ("M", "N", "P"), "potential scalar")
        field = VectorField(M, N, P, box)
        pot = scalar_potential(field, base, box, cfg)
        for p in points:
            value = pot.at(p)
            approx = finite_difference_gradient(pot, p, box=box)
            exact = [evaluate(c, dict(zip("xyz", p))) for c in field.components]
            residual = float(np.linalg.norm(np.subtract(approx, exact)))
            rows.append({"point": list(p), "value": value, "residual": residual})
        label = "f"
    elif kind == "vector":
        S, T, U = _coefficients(args, job, ("S", "T", "U"), "potential vector")
        field = VectorField(S, T, U, box)
        pot = vector_potential(field, base, box, cfg)
        for p in points:
            value = [pot.M(*p), pot.N(*p), pot.P(*p)]
            approx = finite_difference_curl(pot.M, pot.N, pot.P, p, box=box)
            exact = [evaluate(c, dict(zip("xyz", p))) for c in field.components]
            residual = float(np.linalg.norm(np.subtract(approx, exact)))
            rows.append({"point": list(p), "value": value, "residual": residual})
        label = "F"
    else:
        raise _UsageError("potential kind must be scalar or vector")

    max_residual = max(row["residual"] for row in rows)
    if _want_json(args, job):
        _print_json({"operation": "potential", "kind": kind,
                     "base": list(base), "points": rows,
                     "max_residual": max_residual})
    else:
        for row in rows:
            x, y, z = row["point"]
            if kind == "scalar":
                rendered = f"{row['value']:.12g}"
            else:
                rendered = "(" + ", ".join(f"{v:.12g}" for v in row["value"]) + ")"
            print(f"{label}({x:g}, {y:g}, {z:g}) = {rendered}  "
                  f"residual = {row['residual']:.3g}")
        print(f"max residual = {max_residual:.3g}")
    return 0


def cmd_sample_field(args, job) -> int:
    M, N, P = _coefficients(args, job, ("M", "N", "P"), "sample-field")
    box = _box(args, job, default=_UNIT_BOX)
    n = int(_pick(job, "grid", args.grid, 8))
    if n < 2:
        raise _UsageError("--grid must be at least 2")
    field = VectorField(M, N, P, box)
    axes = [np.linspace(lo, hi, n) for lo, hi in box.bounds]
    # x-major ordering: x slowest, z fastest
    points = np.empty((n, n, n, 3))
    points[..., 0] = axes[0][:, None, None]
    points[..., 1] = axes[1][None, :, None]
    points[..., 2] = axes[2][None, None, :]
    points = points.reshape(-1, 3)
    program = kernels.compile_program(list(field.components), ("x", "y", "z"))
    values = kernels.eval_program(program, points)
    rows = np.column_stack([points, values.T])
    if _want_json(args, job):
        _print_json({"operation": "sample-field", "grid": n,
                     "header": ["x", "y", "z", "Fx", "Fy", "Fz"],
                     "rows": [[None if not np.isfinite(v) else v for v in row]
                              for row in rows]})
        return 0
    print("x,y,z,Fx,Fy,Fz")
    for i, row in enumerate(rows):
        if not np.isfinite(row[3:]).all():
            print(f"warning: non-finite field value at row {i} "
                  f"(x={row[0]:g}, y={row[1]:g}, z={row[2]:g})", file=sys.stderr)
        print(",".join(f"{v:.17g}" for v in row))
    return 0


def cmd_det(args, job) -> int:
    raw_rows = _pick(job, "rows", args.rows)
    if not raw_rows or len(raw_rows) != 3:
        raise _UsageError("det requires exactly three --row flags")
    entries = []
    for raw in raw_rows:
        if isinstance(raw, str):
            parts = [p.strip() for p in raw.split(",")]
            if len(parts) != 3:
                raise _UsageError("each --row needs three comma-separated entries")
            entries.append([simplify(as_expr(p)) for p in parts])
        else:
            entries.append([simplify(as_expr(str(p))) for p in raw])
    if all(isinstance(e, Constant) for row in entries for e in row):
        value = det3_num([[e.value for e in row] for row in entries])
        if _want_json(args, job):
            _print_json({"operation": "det", "value": value})
        else:
            print(f"{value:.17g}")
    else:
        result = det3_sym(Matrix3Sym(tuple(tuple(row) for row in entries)))
        if _want_json(args, job):
            _print_json({"operation": "det", "expression": to_string(result)})
        else:
            print(to_string(result))
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, help="Gauss-Legendre order (default 8)")
    common.add_argument("--subdiv", type=int,
                        help="subdivisions per axis (default 16)")
    common.add_argument("--tol", type=float,
                        help="tolerance (verification or potential residual)")
    common.add_argument("--zero-tol", dest="zero_tol", type=float,
                        help="numeric zero-test tolerance (default 1e-9)")
    common.add_argument("--json", action="store_true", help="emit JSON output")
    common.add_argument("--job", metavar="FILE",
                        help="JSON job file; its values win over flags")
    common.add_argument("--box", metavar="X0,X1,Y0,Y1,Z0,Z1",
                        help="domain box bounds (expressions allowed)")

    chain = argparse.ArgumentParser(add_help=False)
    chain.add_argument("--param", action="append", dest="params",
                       metavar="NAME", help="chain parameter (repeat per axis)")
    chain.add_argument("--x", dest="map_x", metavar="EXPR", help="x component map")
    chain.add_argument("--y", dest="map_y", metavar="EXPR", help="y component map")
    chain.add_argument("--z", dest="map_z", metavar="EXPR", help="z component map")
    chain.add_argument("--from", action="append", dest="lowers", metavar="LO",
                       help="parameter lower bound (repeat per --param)")
    chain.add_argument("--to", action="append", dest="uppers", metavar="HI",
                       help="parameter upper bound (repeat per --param)")
    chain.add_argument("--orientation", type=int, choices=(1, -1),
                       help="chain orientation sign (default 1)")

    parser = argparse.ArgumentParser(
        prog="formcalc",
        description="Differential forms on boxes in R^3: exterior "
                    "derivatives, potentials, chain integrals and theorem "
                    "verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, parents, help_text, **kwargs):
        p = sub.add_parser(name, parents=parents, help=help_text, **kwargs)
        p.set_defaults(handler=handler)
        return p

    p = add("d", cmd_d, [common], "apply the exterior derivative to a k-form")
    p.add_argument("--k", type=int, choices=(0, 1, 2), help="form degree")
    for flag in "fMNPSTU":
        p.add_argument(f"-{flag}", dest=f"c{flag}", metavar="EXPR")

    p = add("grad", cmd_grad, [common], "gradient of a scalar function")
    p.add_argument("-f", dest="cf", metavar="EXPR")

    p = add("curl", cmd_curl, [common], "curl of a vector field")
    for flag in "MNP":
        p.add_argument(f"-{flag}", dest=f"c{flag}", metavar="EXPR")

    p = add("div", cmd_div, [common], "divergence of a vector field")
    for flag in "STU":
        p.add_argument(f"-{flag}", dest=f"c{flag}", metavar="EXPR")

    p = add("potential", cmd_potential, [common],
            "reconstruct a scalar or vector potential")
    p.add_argument("kind", choices=("scalar", "vector"))
    for flag in "MNPSTU":
        p.add_argument(f"-{flag}", dest=f"c{flag}", metavar="EXPR")
    p.add_argument("--base", metavar="X,Y,Z", help="base point (default box center)")
    p.add_argument("--at", action="append", metavar="X,Y,Z",
                   help="evaluation point (repeatable; default Halton sample)")

    p = add("integrate", cmd_integrate, [common, chain],
            "integrate a form over a path, surface or region")
    p.add_argument("kind", choices=("path", "surface", "volume"))
    for flag in "fMNPSTU":
        p.add_argument(f"-{flag}", dest=f"c{flag}", metavar="EXPR")

    p = add("verify", cmd_verify, [common, chain],
            "verify an integral theorem on a chain")
    p.add_argument("theorem", choices=("ftc", "stokes", "green", "plane-div", "gauss"))
    for flag in "fMNPSTU":
        p.add_argument(f"-{flag}", dest=f"c{flag}", metavar="EXPR")

    p = add("sample-field", cmd_sample_field, [common],
            "sample a vector field on a uniform grid as CSV")
    for flag in "MNP":
        p.add_argument(f"-{flag}", dest=f"c{flag}", metavar="EXPR")
    p.add_argument("--grid", type=int, metavar="N",
                   help="points per axis (default 8)")

    p = add("det", cmd_det, [common], "3x3 determinant (numeric or symbolic)")
    p.add_argument("-r", "--row", action="append", dest="rows",
                   metavar="A,B,C", help="matrix row (give three times)")

    return parser


# Flags whose values may begin with '-' (negative numbers, leading unary
# minus in expressions).  Their value token is merged into the flag token
# before argparse sees it, so `-U "-3*z"` parses as intended.
_SHORT_VALUE_FLAGS = {"-f", "-M", "-N", "-P", "-S", "-T", "-U", "-r"}
_LONG_VALUE_FLAGS = {"--x", "--y", "--z", "--from", "--to", "--base", "--at",
                     "--box", "--row"}


def _preprocess_argv(argv: list[str]) -> list[str]:
    merged = []
    i = 0
    while i < len(argv):
        token = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if nxt is not None and nxt.startswith("-"):
            if token in _SHORT_VALUE_FLAGS:
                merged.append(token + nxt)
                i += 2
                continue
            if token in _LONG_VALUE_FLAGS:
                merged.append(f"{token}={nxt}")
                i += 2
                continue
        merged.append(token)
        i += 1
    return merged


def main(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _preprocess_argv(list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        job = _load_job(args)
        return args.handler(args, job)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, UnboundVariableError, FormMismatchError,
            NonPlanarSurfaceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PotentialExistenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (EvaluationError, OutOfDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
