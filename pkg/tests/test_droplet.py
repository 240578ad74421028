import cmath
import math

import numpy as np
import pytest

from stardrop.droplet import (
    boundary,
    contains,
    exterior_cauchy_residual,
    harmonic_moment,
    polygon_is_simple,
    schwarz_residual,
    winding_number,
)
from stardrop.model import SubcriticalData, critical_time, omega


@pytest.fixture(scope="module")
def b3(data3):
    return boundary(data3, 512)


def test_boundary_point_at_zero_angle(data3, b3):
    expected = data3.r + data3.t_top * data3.r**3
    assert b3.points[0] == pytest.approx(expected, rel=1e-14)
    assert expected > data3.x_star


def test_boundary_parametrization_d3(data3, b3):
    # r cos(t) + 2 r^3 cos(3t) + i (r sin(t) - 2 r^3 sin(3t))
    r = data3.r
    th = b3.theta
    ref = r * np.cos(th) + 2 * r**3 * np.cos(3 * th) \
        + 1j * (r * np.sin(th) - 2 * r**3 * np.sin(3 * th))
    assert np.max(np.abs(b3.points - ref)) < 1e-14


def test_boundary_symmetries(data3, b3):
    pts = b3.points
    # conjugation: theta -> -theta
    assert np.max(np.abs(np.conj(pts[1:]) - pts[1:][::-1])) < 1e-14
    om = omega(data3.d)
    rotated = om * pts
    shift = len(pts) // (data3.d + 1)
    assert np.max(np.abs(rotated - np.roll(pts, -shift))) < 1e-12


def test_star_enclosed(data3, b3):
    om = omega(data3.d)
    for ell in range(4):
        assert winding_number(b3, data3.x_star * om**ell) == 1
    assert winding_number(b3, 2 * data3.x_star) == 0


def test_boundary_simple_and_critical_detector(data3):
    assert polygon_is_simple(boundary(data3, 256))
    crit = SubcriticalData.compute(3, (1 - 1e-13) / 9, 2.0)
    with pytest.raises(ValueError):
        boundary(crit, 256)


def test_harmonic_moments(data3, b3):
    assert harmonic_moment(b3, 0) == pytest.approx(data3.t0, rel=1e-12)
    assert harmonic_moment(b3, 4) == pytest.approx(data3.t_top, rel=1e-12)
    for k in range(2 * 3 + 4):
        if k in (0, 4):
            continue
        assert abs(harmonic_moment(b3, k)) < 1e-10


def test_area_is_pi_t0(data3, b3):
    # shoelace area of the sampled polygon ~ pi t0
    pts = b3.points
    area = 0.5 * np.abs(np.sum(pts.real * np.roll(pts.imag, -1)
                               - np.roll(pts.real, -1) * pts.imag))
    assert area == pytest.approx(math.pi * data3.t0, rel=1e-4)
    assert harmonic_moment(b3, 0).real * math.pi == pytest.approx(math.pi * data3.t0, rel=1e-12)


def test_moments_other_d():
    for d, tt in ((2, 1.0), (4, 0.8)):
        data = SubcriticalData.compute(d, 0.4 * critical_time(d, tt), tt)
        b = boundary(data, 512)
        assert harmonic_moment(b, 0) == pytest.approx(data.t0, rel=1e-11)
        assert harmonic_moment(b, d + 1) == pytest.approx(tt, rel=1e-11)


def test_schwarz_residual(data3):
    assert schwarz_residual(data3, math.pi / 7) <= 1e-10
    assert schwarz_residual(data3, 0.0) <= 1e-12
    worst = max(schwarz_residual(data3, th)
                for th in np.linspace(0, 2 * math.pi, 512, endpoint=False))
    assert worst <= 1e-9


def test_monotone_growth():
    inner = boundary(SubcriticalData.compute(3, 1.0 / 40, 2.0), 256)
    outer = boundary(SubcriticalData.compute(3, 1.0 / 20, 2.0), 256)
    for z in inner.points:
        assert contains(outer, z)


def test_exterior_cauchy(fam3):
    data = fam3.data
    for z in (2 * data.x_star, 3j * data.x_star, (1.5 - 1.3j) * data.x_star):
        assert exterior_cauchy_residual(fam3, z) <= 1e-6


def test_exterior_cauchy_inside_raises(fam3):
    with pytest.raises(ValueError):
        exterior_cauchy_residual(fam3, 0.5 * fam3.data.x_star + 0.01j)
