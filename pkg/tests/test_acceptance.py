"""Acceptance suite: the package's exit criteria.

Each test checks one criterion at its stated tolerance, using the default
quadrature configuration, and prints a pass/fail line (visible with
``pytest tests/test_acceptance.py -v -s``).
"""

import math

import numpy as np

import formcalc as fc
from conftest import (make_ball, make_circle, make_identity_cube,
                      make_identity_square, make_polar_disk)
from formcalc.expr import diff, evaluate, parse_expr
from formcalc.forms import Form0, Form1, Form2, Form3, VectorField, d0, d1, d2
from formcalc.reconstruct import finite_difference_curl, finite_difference_gradient
from support import random_form1, random_form2, random_points, random_polynomial

RADIAL_BOX = fc.DomainBox.cube(0.5, 2.0)
UNIT_BOX = fc.DomainBox.cube(-1.0, 1.0)
BIG_BOX = fc.DomainBox.cube(-100.0, 100.0)
PI = math.pi


def radial_form0(box=RADIAL_BOX):
    return Form0("sqrt(x^2 + y^2 + z^2)", box)


def report(number: int, description: str, ok: bool, detail: str = ""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {description}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def test_criterion_01_radial_gradient_is_curl_free():
    field = fc.gradient(radial_form0())
    rotation = fc.curl(field)
    cfg = fc.ZeroTestConfig(tol=1e-9)
    ok = all(fc.is_numerically_zero(c, RADIAL_BOX, cfg)
             for c in rotation.components)
    report(1, "curl(grad sqrt(x^2+y^2+z^2)) numerically zero on [0.5,2]^3", ok)


def test_criterion_02_radial_divergence_value():
    field = fc.gradient(radial_form0())
    div = fc.divergence(field).f
    rng = np.random.default_rng(102)
    worst = 0.0
    for point in random_points(rng, RADIAL_BOX, 100):
        b = dict(zip("xyz", point))
        expected = 2.0 / evaluate(parse_expr("sqrt(x^2+y^2+z^2)"), b)
        worst = max(worst, abs(evaluate(div, b) - expected) / abs(expected))
    report(2, "div(grad sqrt(x^2+y^2+z^2)) = 2/sqrt(x^2+y^2+z^2), rel <= 1e-10",
           worst <= 1e-10, f"max rel err {worst:.2e}")


def test_criterion_03_circle_path_integrals():
    eta = Form1("-(y/2)", "x/2", "0", BIG_BOX)
    ok = True
    details = []
    for r in (1.0, 2.0):
        value = fc.integrate_path(eta, make_circle(r=r))
        expected = PI * r * r
        rel = abs(value - expected) / expected
        details.append(f"r={r:g}: rel {rel:.2e}")
        ok = ok and rel <= 1e-10
    report(3, "circle integrals of (-y/2)dx+(x/2)dy equal pi*r^2, rel <= 1e-10",
           ok, "; ".join(details))


def test_criterion_04_stokes_on_polar_disk():
    eta = Form1("-(y/2)", "x/2", "0", BIG_BOX)
    rep = fc.verify_stokes(eta, make_polar_disk(r=1.0), tol=1e-8)
    sides_ok = (abs(rep.lhs - PI) <= 1e-8 * (1 + PI)
                and abs(rep.rhs - PI) <= 1e-8 * (1 + PI))
    report(4, "Stokes on the polar disk: both sides pi, rel_err <= 1e-8",
           rep.passed and sides_ok,
           f"lhs {rep.lhs:.12f}, rhs {rep.rhs:.12f}, rel_err {rep.rel_err:.2e}")


def test_criterion_05_area_exercise():
    half_area = Form1("-(y/2)", "x/2", "0", BIG_BOX)
    value = fc.integrate_path(half_area, make_circle(r=1.0))
    rel = abs(value - PI) / PI
    report(5, "area of the unit disk from (-y dx + x dy)/2, rel <= 1e-10",
           rel <= 1e-10, f"value {value:.12f}")


def test_criterion_06_gauss_on_ball():
    box = fc.DomainBox.cube(-1.5, 1.5)
    omega = Form2.from_field(fc.gradient(radial_form0(box)))
    rep = fc.verify_gauss(omega, make_ball(r=1.0), tol=1e-6)
    expected = 4 * PI
    sides_ok = (abs(rep.lhs - expected) <= 1e-6 * (1 + expected)
                and abs(rep.rhs - expected) <= 1e-6 * (1 + expected))
    report(6, "Gauss on the unit ball with the radial field: both sides 4*pi",
           rep.passed and sides_ok,
           f"lhs {rep.lhs:.10f}, rhs {rep.rhs:.10f}")


def test_criterion_07_spherical_jacobian():
    jac = fc.jacobian3(make_ball(r=2.0))
    rng = np.random.default_rng(107)
    worst = 0.0
    for _ in range(100):
        b = {"rho": rng.uniform(1e-6, 2.0), "phi": rng.uniform(0.0, PI),
             "theta": rng.uniform(0.0, 2 * PI)}
        expected = b["rho"] ** 2 * math.sin(b["phi"])
        worst = max(worst, abs(evaluate(jac, b) - expected) / (1 + abs(expected)))
    report(7, "spherical Jacobian equals rho^2 sin(phi), <= 1e-12", worst <= 1e-12,
           f"max err {worst:.2e}")


def test_criterion_08_volume_from_surface_integral():
    omega = Form2("x/3", "y/3", "z/3", BIG_BOX)
    ball = make_ball(r=1.0)
    flux = sum(fc.integrate_surface(omega, face)
               for face in fc.region_boundary(ball))
    volume = fc.integrate_volume(Form3("1", BIG_BOX), ball)
    expected = 4 * PI / 3
    ok = (abs(flux - expected) <= 1e-6 * (1 + expected)
          and abs(flux - volume) <= 1e-6 * (1 + expected))
    report(8, "ball volume 4*pi/3 from the surface integral of (x,y,z)/3",
           ok, f"flux {flux:.10f}, volume {volume:.10f}")


def test_criterion_09_scalar_potential_reconstruction():
    field = fc.gradient(radial_form0())
    pot = fc.scalar_potential(field, (1.0, 1.0, 1.0), RADIAL_BOX)
    value = pot(2.0, 1.0, 1.0)
    expected = math.sqrt(6.0) - math.sqrt(3.0)
    value_ok = abs(value - expected) <= 1e-7

    rng = np.random.default_rng(109)
    worst = 0.0
    for point in random_points(rng, RADIAL_BOX, 20, margin=0.05):
        approx = finite_difference_gradient(pot, point)
        b = dict(zip("xyz", point))
        exact = [evaluate(c, b) for c in field.components]
        worst = max(worst, max(abs(a - e) for a, e in zip(approx, exact)))
    report(9, "scalar potential: fd-gradient <= 1e-5 at 20 points and "
              "f(2,1,1) = sqrt(6) - sqrt(3) <= 1e-7",
           value_ok and worst <= 1e-5,
           f"|f - oracle| {abs(value - expected):.2e}, worst grad err {worst:.2e}")


def test_criterion_10_vector_potential_reconstruction():
    G = VectorField("x", "2*y", "-3*z", UNIT_BOX)
    vp = fc.vector_potential(G, (0.0, 0.0, 0.0), UNIT_BOX)
    rng = np.random.default_rng(110)
    closed_ok = True
    curl_worst = 0.0
    for point in random_points(rng, UNIT_BOX, 20, margin=0.1):
        x, y, z = point
        closed_ok = closed_ok and (
            abs(vp.M(x, y, z) - 2 * y * z) <= 1e-9
            and abs(vp.N(x, y, z) + x * z) <= 1e-9
            and vp.P(x, y, z) == 0.0)
        approx = finite_difference_curl(vp.M, vp.N, vp.P, point)
        exact = (x, 2 * y, -3 * z)
        curl_worst = max(curl_worst,
                         max(abs(a - e) for a, e in zip(approx, exact)))
    report(10, "vector potential equals (2yz, -xz, 0) <= 1e-9 and fd-curl "
               "matches G <= 1e-5",
           closed_ok and curl_worst <= 1e-5,
           f"worst curl err {curl_worst:.2e}")


def test_criterion_11_rejections():
    radial_field = fc.gradient(radial_form0())
    rejected_vector = False
    try:
        fc.vector_potential(radial_field, (1.0, 1.0, 1.0), RADIAL_BOX)
    except fc.PotentialExistenceError:
        rejected_vector = True
    rotational = VectorField("-(y/2)", "x/2", "0", UNIT_BOX)
    rejected_scalar = False
    try:
        fc.scalar_potential(rotational, (0.0, 0.0, 0.0), UNIT_BOX)
    except fc.PotentialExistenceError:
        rejected_scalar = True
    report(11, "radial field rejected by vector_potential; rotational field "
               "rejected by scalar_potential", rejected_vector and rejected_scalar)


def test_criterion_12a_dd_is_zero():
    rng = np.random.default_rng(112)
    cfg = fc.ZeroTestConfig(tol=1e-9)
    ok = True
    for _ in range(200):
        f = Form0(random_polynomial(rng), UNIT_BOX)
        ok = ok and all(fc.is_numerically_zero(c, UNIT_BOX, cfg)
                        for c in d1(d0(f)).coefficients)
        eta = random_form1(rng, UNIT_BOX)
        ok = ok and fc.is_numerically_zero(d2(d1(eta)).g, UNIT_BOX, cfg)
    report(12, "d(d(form)) numerically zero for 200 random polynomial forms "
               "at tol 1e-9", ok)


def test_criterion_12b_verifiers_on_identity_chains():
    rng = np.random.default_rng(113)
    diag_path = fc.Path("t", "t", "t", "t", (0.0, 1.0))
    square = make_identity_square()
    cube = make_identity_cube()
    ok = True
    for _ in range(50):
        f = Form0(random_polynomial(rng), BIG_BOX)
        ok = ok and fc.verify_ftc(f, diag_path, tol=1e-8).passed
        eta = random_form1(rng, BIG_BOX)
        ok = ok and fc.verify_stokes(eta, square, tol=1e-8).passed
        m, n = random_polynomial(rng), random_polynomial(rng)
        ok = ok and fc.verify_green(m, n, square, tol=1e-8).passed
        ok = ok and fc.verify_plane_divergence(m, n, square, tol=1e-8).passed
        omega = random_form2(rng, BIG_BOX)
        ok = ok and fc.verify_gauss(omega, cube, tol=1e-8).passed
    report(12, "all four verifiers pass on identity square/cube for 50 random "
               "polynomial forms at tol 1e-8", ok)


def test_criterion_12c_orientation_reversal_is_exact():
    rng = np.random.default_rng(114)
    eta = random_form1(rng, BIG_BOX)
    omega = random_form2(rng, BIG_BOX)
    nu = Form3(random_polynomial(rng), BIG_BOX)
    path = fc.Path("t", "cos(t)", "sin(t)", "t/4", (0.0, 2 * PI))
    path_rev = fc.Path("t", *path.maps, interval=path.interval, orientation=-1)
    surf = fc.Surface(("u", "v"), "u", "v^2", "u*v", ((0, 1), (0, 1)))
    surf_rev = fc.Surface(surf.params, *surf.maps, bounds=surf.bounds,
                          orientation=-1)
    cube = make_identity_cube()
    cube_rev = fc.Region(cube.params, *cube.maps, bounds=cube.bounds,
                         orientation=-1)
    ok = (fc.integrate_path(eta, path_rev) == -fc.integrate_path(eta, path)
          and fc.integrate_surface(omega, surf_rev) == -fc.integrate_surface(omega, surf)
          and fc.integrate_volume(nu, cube_rev) == -fc.integrate_volume(nu, cube))
    report(12, "orientation reversal negates path/surface/volume integrals "
               "exactly", ok)


def test_criterion_12d_derivative_convergence():
    corpus = ["sqrt(x^2 + y^2 + z^2)", "sin(x)*cos(y) + z", "exp(x/2)*z",
              "x^2*y*z^3", "ln(1 + x^2 + y^2)", "x/(1 + y^2)"]
    rng = np.random.default_rng(115)
    K = 100.0
    ok = True
    for text in corpus:
        e = parse_expr(text)
        for var in ("x", "y", "z"):
            symbolic = diff(e, var)
            for _ in range(10):
                b = dict(zip("xyz", rng.uniform(0.6, 1.4, size=3)))
                exact = evaluate(symbolic, b)
                for h in (1e-3, 1e-4):
                    hi, lo = dict(b), dict(b)
                    hi[var] += h
                    lo[var] -= h
                    fd = (evaluate(e, hi) - evaluate(e, lo)) / (2 * h)
                    ok = ok and abs(exact - fd) <= K * h * h
    report(12, "symbolic derivatives match central differences to O(h^2) "
               "on the smooth corpus", ok)


def test_criterion_13_path_and_surface_independence():
    # path independence of the curl-free radial 1-form
    eta = Form1.from_field(fc.gradient(radial_form0()))
    straight = fc.Path("t", "1 + t", "1", "1", (0.0, 1.0))
    curved = fc.Path("t", "1 + t", "1 + sin(pi*t)/2", "1", (0.0, 1.0))
    a = fc.integrate_path(eta, straight)
    b = fc.integrate_path(eta, curved)
    paths_ok = abs(a - b) <= 1e-8

    # surface independence: hemisphere vs disk spanning the unit circle
    rng = np.random.default_rng(116)
    box = fc.DomainBox.cube(-1.2, 1.2)
    omega_eta = Form1(random_polynomial(rng), random_polynomial(rng),
                      random_polynomial(rng), box)
    hemisphere = fc.Surface(("phi", "theta"),
                            "sin(phi)*cos(theta)", "sin(phi)*sin(theta)",
                            "cos(phi)", ((0.0, PI / 2), (0.0, 2 * PI)))
    disk = make_polar_disk(r=1.0)
    d_eta = d1(omega_eta)
    u = fc.integrate_surface(d_eta, hemisphere)
    v = fc.integrate_surface(d_eta, disk)
    surfaces_ok = abs(u - v) <= 1e-6 * (1 + max(abs(u), abs(v)))
    report(13, "path independence (two paths, <= 1e-8) and surface "
               "independence (hemisphere vs disk, <= 1e-6)",
           paths_ok and surfaces_ok,
           f"paths {abs(a - b):.2e}, surfaces {abs(u - v):.2e}")
