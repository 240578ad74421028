import cmath
import math

import numpy as np
import pytest

from stardrop.curve import compute_curve
from stardrop.errors import BranchAmbiguityWarning, SectorBoundaryError
from stardrop.model import SubcriticalData, omega
from stardrop.surface import branches, eta, kappa_table, psi, sector_of, xi


def test_psi_basic_values(data3):
    assert psi(data3, data3.rho) == pytest.approx(data3.x_star, rel=1e-13)
    assert psi(data3, 1.0) == pytest.approx(data3.r + data3.t_top * data3.r**3, rel=1e-15)
    w = 0.8 + 0.3j
    assert psi(data3, w.conjugate()) == pytest.approx(psi(data3, w).conjugate())
    with pytest.raises(ZeroDivisionError):
        psi(data3, 0.0)


def test_psi_maps_rotated_branch_points(data3):
    om = omega(3)
    for ell in range(4):
        assert psi(data3, om**ell * data3.rho) == pytest.approx(
            om**ell * data3.x_star, abs=1e-14)


def test_branch_residuals_and_vieta(data3, rng):
    d = data3.d
    for _ in range(50):
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        bs = branches(data3, z)
        assert np.all(bs.residuals(data3) <= 1e-12 * (1 + abs(z) ** (d + 1)))
        mods = np.abs(bs.w)
        assert np.all(np.diff(mods) <= 1e-12)
        assert bs.w.prod() == pytest.approx((-1) ** (d + 1) * data3.t_top * data3.r ** (d - 1),
                                            rel=1e-11)


def test_branch_double_root_at_star_endpoint(data3):
    bs = branches(data3, data3.x_star)
    assert abs(bs.w[0] - bs.w[1]) < 1e-6
    assert abs(bs.w[0] - data3.rho) < 1e-6


def test_w1_large_z_expansion(data3):
    d = data3.d
    for z in (50.0, 200.0 + 40j, -120j):
        w1 = branches(data3, z).w[0]
        approx = z / data3.r - data3.t_top * data3.r ** (2 * d - 1) / z**d
        assert abs(w1 - approx) <= 10 * abs(z) ** (-(2 * d + 1)) * abs(z / data3.r)


def test_cut_characterization(data3):
    for x in np.linspace(0.05, 0.95, 9) * data3.x_star:
        bs = branches(data3, x)
        mods = np.abs(bs.w)
        assert abs(mods[0] - mods[1]) < 1e-10


def test_rotation_covariance_of_root_sets(rng):
    from stardrop.model import critical_time

    for d in (2, 3, 4):
        data = SubcriticalData.compute(d, 0.3 * critical_time(d, 2.0), 2.0)
        om = omega(d)
        for _ in range(200):
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            ws = np.sort_complex(branches(data, z).w * om)
            ws2 = np.sort_complex(branches(data, om * z).w)
            assert np.max(np.abs(ws - ws2)) < 1e-9 * (1 + abs(z))
            xs1 = np.sort_complex(branches(data, z).xi / om)
            xs2 = np.sort_complex(branches(data, om * z).xi)
            assert np.max(np.abs(xs1 - xs2)) < 1e-9 * (1 + abs(z))


def test_conjugation_symmetry(data3, rng):
    for _ in range(30):
        z = complex(rng.uniform(-2, 2), rng.uniform(0.1, 2))
        a = np.sort_complex(np.conj(branches(data3, z).xi))
        b = np.sort_complex(branches(data3, np.conj(z)).xi)
        assert np.max(np.abs(a - b)) < 1e-10 * (1 + abs(z))


def test_psi_one_to_one_outside_rho(data3, rng):
    pts = []
    while len(pts) < 2000:
        w = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if abs(w) >= data3.rho:
            pts.append(w)
    pts = np.array(pts)
    vals = psi(data3, pts)
    idx = rng.permutation(len(pts))
    w1, w2 = pts, pts[idx]
    mask = np.abs(w1 - w2) > 1e-12
    ratio = np.abs(vals - vals[idx])[mask] / np.abs(w1 - w2)[mask]
    assert np.min(ratio) > 1e-10


def test_xi_cut_warning(data3):
    with pytest.warns(BranchAmbiguityWarning):
        xi(data3, 0.5 * data3.x_star, 1)


def test_xi1_asymptotics(data3):
    d, t0, tt = data3.d, data3.t0, data3.t_top
    for z in (30.0, 60.0 * cmath.exp(0.4j), 100j):
        v = xi(data3, z, 1)
        err = abs(v - tt * z**d - t0 / z)
        assert err < 5 * abs(z) ** (-(d + 2)) * max(1.0, tt)


def test_xi1_equals_conj_on_boundary(data3):
    for th in np.linspace(0, 2 * math.pi, 17, endpoint=False):
        z = psi(data3, cmath.exp(1j * th))
        assert abs(xi(data3, z, 1) - z.conjugate()) < 1e-10


def test_sector_resolution(data3):
    d = data3.d
    sec = sector_of(d, cmath.exp(0.3j))
    assert (sec.ell, sec.sign) == (0, 1)
    sec = sector_of(d, cmath.exp(-0.3j))
    assert (sec.ell, sec.sign) == (0, -1)
    with pytest.raises(SectorBoundaryError):
        sector_of(d, 1.0 + 0j)
    with pytest.raises(SectorBoundaryError):
        sector_of(d, cmath.exp(1j * math.pi / (d + 1)))


def test_kappa_table_values():
    for d, tt in ((2, 1.0), (3, 2.0), (4, 0.7)):
        table = kappa_table(d, tt)
        base = tt ** (-1.0 / d)
        assert table.value(2, 0, +1) == pytest.approx(base)
        assert table.value(2, 0, -1) == pytest.approx(base)
        for k, ell, sign, v in table.entries():
            assert abs(v) == pytest.approx(base, rel=1e-14)
            if k == 2:
                assert table.value(2, ell, +1) == pytest.approx(table.value(2, ell, -1))


def test_kappa_continuation_relations():
    # eta_{k,+-} continues eta_{k-1,-+} across Sigma_{k-1}: kappas must match
    for d, tt in ((3, 2.0), (4, 1.3), (5, 0.8)):
        table = kappa_table(d, tt)
        for k in range(3, d + 2):
            for ell in range(-(d // 2), d // 2 + 1):
                if k % 2 == 0:
                    assert table.value(k, ell, +1) == pytest.approx(table.value(k - 1, ell, -1))
                else:
                    assert table.value(k, ell, +1) == pytest.approx(table.value(k - 1, ell + 1, -1))


def test_eta_decay(data3):
    d, t0 = data3.d, data3.t0
    for k in (2, 3, 4):
        for z in (40.0 * cmath.exp(0.2j), 80.0 * cmath.exp(-1.1j)):
            v = eta(data3, z, k)
            assert abs(v + t0 / d / z) < 5 * abs(z) ** (-2 - 1.0 / d)


def test_eta_continuation_across_cut(data3):
    # eta_{k,+-} = eta_{k-1,-+} across Sigma_{k-1}
    d = data3.d
    for k in (3, 4):
        th = math.pi / (d + 1) if (k - 1) % 2 == 0 else 0.0
        s = 1.7
        delta = 1e-6
        zp = s * cmath.exp(1j * (th + delta))
        zm = s * cmath.exp(1j * (th - delta))
        assert abs(eta(data3, zp, k) - eta(data3, zm, k - 1)) < 1e-5
        assert abs(eta(data3, zm, k) - eta(data3, zp, k - 1)) < 1e-5


def test_branches_satisfy_spectral_curve(data3, rng):
    sc = compute_curve(data3)
    for _ in range(40):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        bs = branches(data3, z)
        for k in range(data3.d + 1):
            val = sc.evaluate(z, bs.xi[k])
            assert abs(val) <= 1e-8 * (1 + abs(z)) ** (data3.d + 1)
