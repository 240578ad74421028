import numpy as np
import pytest

from stardrop.curve import (
    beta_closed_form,
    compute_curve,
    curve_residual,
    lower_branch_elementary_coeffs,
)
from stardrop.model import SubcriticalData, critical_time, omega
from stardrop.surface import branches


@pytest.fixture(scope="module")
def curve3(data3):
    return compute_curve(data3)


def test_known_coefficients_d3(data3, curve3):
    assert curve3.c[2] == pytest.approx(2.0, rel=1e-12)          # c_d = t_top
    assert curve3.c[1] == pytest.approx(0.1, rel=1e-12)          # c_{d-1} = t0 t_top
    assert curve3.beta == pytest.approx(beta_closed_form(data3), rel=1e-12)


def test_d2_coefficient_identity(data2):
    sc = compute_curve(data2)
    t0, t3 = data2.t0, data2.t_top
    assert sc.c[0] == pytest.approx(t0 * t3 + 1.0 / t3, rel=1e-12)


def test_beta_positive_and_domain():
    for d in (2, 3, 4, 5):
        data = SubcriticalData.compute(d, 0.5 * critical_time(d, 1.3), 1.3)
        assert beta_closed_form(data) > 0
        sc = compute_curve(data)
        assert np.all(sc.c > 0) and sc.beta > 0


def test_beta_two_routes_agree():
    for d in (2, 3, 4):
        data = SubcriticalData.compute(d, 0.3 * critical_time(d, 2.0), 2.0)
        assert compute_curve(data).beta == pytest.approx(beta_closed_form(data), rel=1e-10)


def test_on_surface_residual(data3, curve3, rng):
    for _ in range(50):
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) * data3.x_star
        for k in range(1, data3.d + 2):
            assert curve_residual(data3, curve3, z, k) <= 1e-8


def test_schwarz_point_on_curve(data3, curve3):
    # on the droplet boundary xi = conj z solves the curve
    from stardrop.surface import psi
    import cmath
    for th in (0.3, 1.1, 2.7):
        z = psi(data3, cmath.exp(1j * th))
        val = curve3.evaluate(z, z.conjugate())
        assert abs(val) <= 1e-12


def test_rotation_symmetry_of_curve(data3, curve3, rng):
    om = omega(data3.d)
    for _ in range(20):
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        xi = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        a = curve3.evaluate(z, xi)
        b = curve3.evaluate(om * z, xi / om)
        assert a == pytest.approx(b, abs=1e-12)


def test_symmetry_z_xi(data3, curve3, rng):
    for _ in range(20):
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        xi = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        assert curve3.evaluate(z, xi) == pytest.approx(curve3.evaluate(xi, z), abs=1e-12)


def test_laurent_positivity_and_recursions(data3, curve3):
    d = data3.d
    b = lower_branch_elementary_coeffs(data3, jmax=3)
    assert np.all(b[:4, :d - 1] > 0)          # b_{j,k} > 0 for j <= 3, k <= d-1
    # b_{0,1} = t0 (Cauchy-transform leading moment times t0)
    assert b[0, 0] == pytest.approx(data3.t0, rel=1e-8)
    # c_{d+1-k} = b_{0,k-1} c_d for k = 2..d-1
    for k in range(2, d):
        assert curve3.c[d - k] == pytest.approx(b[0, k - 2] * curve3.c[d - 1], rel=1e-8)
    # c_1 = 1/c_d + b_{0,d-1} c_d
    assert curve3.c[0] == pytest.approx(1.0 / curve3.c[d - 1] + b[0, d - 2] * curve3.c[d - 1],
                                        rel=1e-8)


def test_moment_positivity_larger_d():
    data = SubcriticalData.compute(4, 0.4 * critical_time(4, 1.0), 1.0)
    b = lower_branch_elementary_coeffs(data, jmax=3)
    assert np.all(b[:4, :3] > 0)
