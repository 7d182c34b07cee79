"""Benchmark the compiled evaluator against the pure-numpy fallback.

Times representative hot-loop workloads: raw program evaluation on point
batches (polynomial, radial-field second derivative, spherical volume
pullback) and two end-to-end operations (a volume integral and a scalar
potential evaluation).  Run with

    python3 benchmarks/bench_backends.py [--points N]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

import formcalc as fc
from formcalc import kernels
from formcalc.expr import diff, parse_expr, simplify, substitute
from formcalc.integrate import QuadConfig


def program_workloads() -> dict[str, kernels.Program]:
    xyz = ("x", "y", "z")
    poly = parse_expr("3*x^2*y - 2*y*z^3 + x*y*z + 7")
    radial = parse_expr("x/sqrt(x^2+y^2+z^2)")
    radial_yz = simplify(diff(simplify(diff(radial, "y")), "z"))
    spherical = {
        "x": parse_expr("rho*sin(phi)*cos(theta)"),
        "y": parse_expr("rho*sin(phi)*sin(theta)"),
        "z": parse_expr("rho*cos(phi)"),
    }
    pullback = simplify(substitute(parse_expr("2/sqrt(x^2+y^2+z^2)"), spherical))
    return {
        "polynomial (deg 4)": kernels.compile_program([poly], xyz),
        "radial d2 (M_yz)": kernels.compile_program([radial_yz], xyz),
        "volume pullback": kernels.compile_program(
            [pullback], ("rho", "phi", "theta")),
    }


def time_call(fn, repeats: int = 3) -> float:
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=1 << 21,
                    help="points per raw-program workload (default 2^21)")
    args = ap.parse_args()

    backends = fc.available_backends()
    if "compiled" not in backends:
        print("note: compiled extension not built; benchmarking fallback only")

    rng = np.random.default_rng(7)
    rows = []
    for name, program in program_workloads().items():
        pts = rng.uniform(0.3, 1.8, size=(args.points, len(program.variables)))
        for backend in backends:
            dt = time_call(lambda: kernels.eval_program(program, pts, backend=backend))
            rows.append((name, backend, program.code.shape[0],
                         args.points / dt / 1e6, dt))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'backend':<8}  {'instr':>5}  "
          f"{'Mpts/s':>8}  {'seconds':>8}")
    for name, backend, n_instr, rate, dt in rows:
        print(f"{name:<{width}}  {backend:<8}  {n_instr:>5}  {rate:>8.1f}  {dt:>8.3f}")
    by_key = {(r[0], r[1]): r[3] for r in rows}
    if "compiled" in backends:
        print()
        for name in dict.fromkeys(r[0] for r in rows):
            speedup = by_key[(name, "compiled")] / by_key[(name, "python")]
            print(f"speedup {name}: {speedup:.1f}x")

    # end-to-end: Gauss volume side on the unit ball at default config
    print("\nend-to-end (default QuadConfig):")
    box = fc.DomainBox.cube(-1.5, 1.5)
    nu = fc.Form3("2/sqrt(x^2+y^2+z^2)", box)
    ball = fc.Region(("rho", "phi", "theta"),
                     "rho*sin(phi)*cos(theta)", "rho*sin(phi)*sin(theta)",
                     "rho*cos(phi)", ((0, 1), (0, math.pi), (0, 2 * math.pi)))
    cfg = QuadConfig()
    try:
        for backend in backends:
            kernels.set_backend(backend)
            dt = time_call(lambda: fc.integrate_volume(nu, ball, cfg), repeats=2)
            print(f"  integrate_volume (128^3 nodes)  {backend:<8}  {dt:.3f}s")

        pbox = fc.DomainBox.cube(0.5, 2.0)
        field = fc.gradient(fc.Form0("sqrt(x^2+y^2+z^2)", pbox))
        for backend in backends:
            kernels.set_backend(backend)
            pot = fc.scalar_potential(field, (1.0, 1.0, 1.0), pbox, cfg)
            # distinct query points so memoization cannot skew the timing
            queries = [(1.31 + 0.01 * i, 0.93, 1.67) for i in range(3)]
            t0 = time.perf_counter()
            for q in queries:
                pot.at(q)
            dt = (time.perf_counter() - t0) / len(queries)
            print(f"  scalar potential evaluation     {backend:<8}  {dt:.3f}s")
    finally:
        kernels.set_backend(None)


if __name__ == "__main__":
    main()
