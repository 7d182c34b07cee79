import math

import pytest

import formcalc as fc


@pytest.fixture
def fast_cfg():
    """Light quadrature settings for unit tests: far cheaper than the
    defaults but still effectively exact for the polynomial and
    full-period trigonometric integrands used here."""
    return fc.QuadConfig(gauss_order=8, subdivisions=4)


@pytest.fixture
def unit_box():
    return fc.DomainBox.cube(-1.0, 1.0)


@pytest.fixture
def radial_box():
    """Box away from the origin where the radial field is smooth."""
    return fc.DomainBox.cube(0.5, 2.0)


@pytest.fixture
def radial_f(radial_box):
    return fc.Form0("sqrt(x^2 + y^2 + z^2)", radial_box)


def make_circle(r=1.0, span=2 * math.pi):
    return fc.Path("t", f"{r}*cos(t)", f"{r}*sin(t)", "0", (0.0, span))


def make_polar_disk(r=1.0):
    return fc.Surface(("rho", "theta"), "rho*cos(theta)", "rho*sin(theta)",
                      "0", ((0.0, r), (0.0, 2 * math.pi)))


def make_ball(r=1.0):
    return fc.Region(("rho", "phi", "theta"),
                     "rho*sin(phi)*cos(theta)",
                     "rho*sin(phi)*sin(theta)",
                     "rho*cos(phi)",
                     ((0.0, r), (0.0, math.pi), (0.0, 2 * math.pi)))


def make_identity_square():
    return fc.Surface(("u", "v"), "u", "v", "0", ((0.0, 1.0), (0.0, 1.0)))


def make_identity_cube():
    return fc.Region(("u", "v", "w"), "u", "v", "w",
                     ((0.0, 1.0), (0.0, 1.0), (0.0, 1.0)))
