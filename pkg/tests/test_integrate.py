import math

import numpy as np
import pytest

import formcalc as fc
from conftest import make_ball, make_circle, make_identity_cube, make_polar_disk
from formcalc.errors import EvaluationError, OutOfDomainError
from formcalc.expr import evaluate
from formcalc.forms import DomainBox, Form1, Form2, Form3
from formcalc.integrate import QuadConfig, composite_rule, quad_1d, tensor_rule
from support import random_form1, random_form2

BIG_BOX = DomainBox.cube(-100.0, 100.0)


class TestQuadConfig:
    def test_defaults(self):
        cfg = QuadConfig()
        assert (cfg.gauss_order, cfg.subdivisions) == (8, 16)
        assert cfg.potential_tol == 1e-5
        assert cfg.zero_tol == 1e-9

    def test_validation(self):
        with pytest.raises(ValueError):
            QuadConfig(gauss_order=1)
        with pytest.raises(ValueError):
            QuadConfig(subdivisions=0)


class TestQuad1D:
    def test_full_circle_angle(self):
        assert quad_1d(lambda t: 1.0, 0.0, 2 * math.pi) == pytest.approx(
            2 * math.pi, rel=1e-15)

    def test_two_rho(self):
        # the 2*rho factor in the 4*pi*r^2 computation
        r = 1.5
        assert quad_1d(lambda t: 2 * t, 0.0, r) == pytest.approx(r * r, rel=1e-14)

    def test_sin_phi(self):
        assert quad_1d(math.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-14)

    def test_zero_length_interval_is_exact_zero(self):
        assert quad_1d(lambda t: 123.0, 0.7, 0.7) == 0.0

    def test_reversed_interval_negates(self):
        cfg = QuadConfig(gauss_order=4, subdivisions=2)
        forward = quad_1d(lambda t: t * t, 0.0, 1.0, cfg)
        backward = quad_1d(lambda t: t * t, 1.0, 0.0, cfg)
        assert backward == pytest.approx(-forward, rel=1e-15)

    def test_polynomial_exactness_at_order_bound(self):
        # degree 2n-1 = 3 at order 2
        cfg = QuadConfig(gauss_order=2, subdivisions=1)
        got = quad_1d(lambda t: 4 * t ** 3 + t, 0.0, 2.0, cfg)
        assert got == pytest.approx(16.0 + 2.0, rel=1e-14)

    def test_non_finite_sample(self):
        with pytest.raises(EvaluationError):
            quad_1d(lambda t: 1.0 / (t - 0.5), 0.0, 1.0,
                    QuadConfig(gauss_order=3, subdivisions=1))

    def test_rule_is_subinterval_major(self):
        cfg = QuadConfig(gauss_order=2, subdivisions=2)
        nodes, weights = composite_rule(0.0, 1.0, cfg)
        assert nodes.size == 4
        assert (nodes[:2] < 0.5).all() and (nodes[2:] > 0.5).all()
        assert weights.sum() == pytest.approx(1.0, rel=1e-15)


class TestPathIntegrals:
    @pytest.mark.parametrize("r", [1.0, 2.0])
    def test_rotational_field_around_circle(self, r):
        eta = Form1("-(y/2)", "x/2", "0", BIG_BOX)
        value = fc.integrate_path(eta, make_circle(r=r))
        assert value == pytest.approx(math.pi * r * r, rel=1e-10)

    def test_exact_form_gives_endpoint_difference(self, fast_cfg):
        f = fc.Form0("x*y*z + x^2", BIG_BOX)
        eta = fc.d0(f)
        path = fc.Path("t", "t", "2*t", "3*t^2", (0.0, 1.0))
        value = fc.integrate_path(eta, path, fast_cfg)
        expected = (evaluate(f.f, {"x": 1, "y": 2, "z": 3})
                    - evaluate(f.f, {"x": 0, "y": 0, "z": 0}))
        assert value == pytest.approx(expected, rel=1e-12)

    def test_area_form_exercise(self):
        half_area = Form1("-(y/2)", "x/2", "0", BIG_BOX)
        value = fc.integrate_path(half_area, make_circle(r=1.0))
        assert value == pytest.approx(math.pi, rel=1e-10)

    def test_orientation_reversal_negates_exactly(self, fast_cfg):
        eta = Form1("y*x", "x + z", "z^2", BIG_BOX)
        path = fc.Path("t", "cos(t)", "sin(t)", "t/4", (0.0, 2 * math.pi))
        reverse = fc.Path(path.param, *path.maps, interval=path.interval,
                          orientation=-1)
        forward = fc.integrate_path(eta, path, fast_cfg)
        assert fc.integrate_path(eta, reverse, fast_cfg) == -forward

    def test_reparameterization_invariance(self):
        eta = Form1("-(y/2)", "x/2", "0", BIG_BOX)
        slow = make_circle(r=1.0)
        fast = fc.Path("t", "cos(2*t)", "sin(2*t)", "0", (0.0, math.pi))
        a = fc.integrate_path(eta, slow)
        b = fc.integrate_path(eta, fast)
        assert a == pytest.approx(b, rel=1e-10)

    def test_linearity(self, fast_cfg, unit_box):
        rng = np.random.default_rng(14)
        path = fc.Path("t", "t/2", "t^2/2", "t/4", (0.0, 1.0))
        u = random_form1(rng, unit_box)
        v = random_form1(rng, unit_box)
        alpha, beta = 1.75, -0.5
        combined = fc.integrate_path(fc.linear_combine(alpha, u, beta, v),
                                     path, fast_cfg)
        separate = (alpha * fc.integrate_path(u, path, fast_cfg)
                    + beta * fc.integrate_path(v, path, fast_cfg))
        assert combined == pytest.approx(separate, rel=1e-12)

    def test_image_outside_box_detected(self, fast_cfg):
        eta = Form1("x", "y", "z", DomainBox.cube(-1.0, 1.0))
        with pytest.raises(OutOfDomainError):
            fc.integrate_path(eta, make_circle(r=2.0), fast_cfg)

    def test_non_finite_integrand_reported(self, fast_cfg):
        eta = Form1("sqrt(x)", "0", "0", BIG_BOX)
        path = fc.Path("t", "t - 2", "0", "0", (0.0, 1.0))
        with pytest.raises(EvaluationError):
            fc.integrate_path(eta, path, fast_cfg)


class TestSurfaceIntegrals:
    def test_area_two_form_over_polar_disk(self):
        omega = Form2("0", "0", "1", BIG_BOX)
        for r in (1.0, 2.0):
            value = fc.integrate_surface(omega, make_polar_disk(r=r))
            assert value == pytest.approx(math.pi * r * r, rel=1e-12)

    def test_radial_flux_through_sphere(self, fast_cfg):
        box = DomainBox.cube(-1.5, 1.5)
        G = fc.gradient(fc.Form0("sqrt(x^2+y^2+z^2)", box))
        omega = Form2.from_field(G)
        sphere = fc.region_boundary(make_ball(r=1.0))[0]
        value = fc.integrate_surface(omega, sphere, fast_cfg)
        assert value == pytest.approx(4 * math.pi, rel=1e-9)

    def test_zero_form_is_exact_zero(self, fast_cfg):
        omega = Form2("0", "0", "0", BIG_BOX)
        assert fc.integrate_surface(omega, make_polar_disk(), fast_cfg) == 0.0

    def test_orientation_reversal(self, fast_cfg, unit_box):
        rng = np.random.default_rng(15)
        omega = random_form2(rng, unit_box)
        disk = fc.Surface(("u", "v"), "u/2", "v/2", "u*v/4", ((0, 1), (0, 1)))
        flipped = fc.Surface(disk.params, *disk.maps, bounds=disk.bounds,
                             orientation=-1)
        forward = fc.integrate_surface(omega, disk, fast_cfg)
        assert fc.integrate_surface(omega, flipped, fast_cfg) == -forward

    def test_degenerate_faces_integrate_to_zero(self, fast_cfg):
        box = DomainBox.cube(-1.5, 1.5)
        G = fc.gradient(fc.Form0("sqrt(x^2+y^2+z^2)", box))
        omega = Form2.from_field(G)
        faces = fc.region_boundary(make_ball(r=1.0))
        # rho=0 face collapses to the origin where the field is singular;
        # its integrand is structurally zero so integration succeeds
        assert fc.integrate_surface(omega, faces[1], fast_cfg) == 0.0


class TestVolumeIntegrals:
    def test_unit_cube_volume(self, fast_cfg):
        nu = Form3("1", BIG_BOX)
        assert fc.integrate_volume(nu, make_identity_cube(), fast_cfg) == \
            pytest.approx(1.0, rel=1e-14)

    def test_ball_volume(self):
        nu = Form3("1", BIG_BOX)
        for r in (1.0, 2.0):
            value = fc.integrate_volume(nu, make_ball(r=r))
            assert value == pytest.approx(4 * math.pi * r ** 3 / 3, rel=1e-12)

    def test_radial_divergence_over_ball(self, fast_cfg):
        box = DomainBox.cube(-1.5, 1.5)
        nu = Form3("2/sqrt(x^2+y^2+z^2)", box)
        value = fc.integrate_volume(nu, make_ball(r=1.0), fast_cfg)
        assert value == pytest.approx(4 * math.pi, rel=1e-9)

    def test_orientation_reversal(self, fast_cfg):
        nu = Form3("x*y + z", BIG_BOX)
        cube = make_identity_cube()
        flipped = fc.Region(cube.params, *cube.maps, bounds=cube.bounds,
                            orientation=-1)
        forward = fc.integrate_volume(nu, cube, fast_cfg)
        assert fc.integrate_volume(nu, flipped, fast_cfg) == -forward


class TestTensorRule:
    def test_weights_sum_to_volume(self, fast_cfg):
        points, weights = tensor_rule(((0, 2), (0, 3)), fast_cfg)
        assert points.shape[1] == 2
        assert weights.sum() == pytest.approx(6.0, rel=1e-14)

    def test_empty_axis_gives_empty_rule(self, fast_cfg):
        points, weights = tensor_rule(((0, 2), (1, 1)), fast_cfg)
        assert points.shape[0] == 0 and weights.size == 0
