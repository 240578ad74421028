import cmath
import math

import numpy as np
import pytest
from scipy.special import airy
from mpmath import mp

from stardrop.errors import SectorBoundaryError
from stardrop.genairy import (
    asymptotic_check,
    derivatives_at_zero,
    p0_stack_mp,
    p_eval,
    p_series,
)
from stardrop.splitnum import SplitValue


def test_airy_value_at_zero():
    # classical Airy: Ai(0) = 3^{-2/3}/Gamma(2/3)
    st = p_eval(2, 0, 0.0)
    assert st.value(0).to_complex().real == pytest.approx(0.3550280538878172, rel=1e-12)
    assert abs(st.value(0).to_complex().imag) < 1e-16


def test_matches_scipy_airy_on_interval():
    for x in np.linspace(-2, 2, 17):
        ai, aip, _, _ = airy(x)
        st = p_eval(2, 0, x, max_deriv=2)
        assert st.value(0).to_complex() == pytest.approx(ai, rel=1e-12, abs=1e-13)
        assert st.value(1).to_complex() == pytest.approx(aip, rel=1e-12, abs=1e-13)


def test_matches_scipy_airy_complex_and_recessive():
    for z in (10.0, 1 + 1j, 3 - 2j, 8j, -5.0):
        ai = airy(complex(z))[0]
        got = p_eval(2, 0, z).value(0).to_complex()
        assert got == pytest.approx(ai, rel=1e-12)


def test_gamma_seeds_match_quadrature():
    for d in (2, 3, 4, 5):
        seeds = derivatives_at_zero(d, d - 1)
        st = p_eval(d, 0, 0.0, max_deriv=d - 1)
        for j in range(d):
            assert st.value(j).to_complex() == pytest.approx(complex(seeds[j]), rel=1e-12)


def test_ode_residual(rng):
    for d in (2, 3, 4):
        for _ in range(40):
            z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
            if abs(z) > 10:
                z *= 10 / abs(z)
            st = p_eval(d, int(rng.integers(0, d + 1)), z, max_deriv=d)
            assert st.ode_residual() <= 1e-10


def test_sum_rule(rng):
    for d in (2, 3, 4):
        for _ in range(15):
            z = complex(rng.uniform(-6, 6), rng.uniform(-6, 6))
            stacks = [p_eval(d, l, z) for l in range(d + 1)]
            tot = SplitValue.zero()
            for s in stacks:
                tot = tot + s.value(0)
            scale = max(abs(s.value(0)) for s in stacks)
            assert abs(tot.to_complex()) <= 1e-12 * scale


def test_rotation_symmetry(rng):
    for d in (2, 3):
        om = cmath.exp(2j * math.pi / (d + 1))
        for ell in range(1, d + 1):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            a = p_eval(d, ell, z).value(0).to_complex()
            b = om**ell * p_eval(d, 0, om**ell * z).value(0).to_complex()
            assert a == pytest.approx(b, rel=1e-11, abs=1e-15)


def test_series_oracle_agreement():
    for d in (2, 3, 4):
        for z in (1 + 1j, -3.0, 5.0, 8j, -6 - 5j, 10.0):
            jm = min(2, d)
            a = p_eval(d, 0, z, max_deriv=jm).as_complex()
            b = p_series(d, 0, z, max_deriv=jm).as_complex()
            assert np.max(np.abs(a - b) / np.abs(b)) <= 1e-10


def test_series_oracle_nonzero_ell():
    a = p_eval(3, 2, 2 - 1j, max_deriv=1).as_complex()
    b = p_series(3, 2, 2 - 1j, max_deriv=1).as_complex()
    assert np.max(np.abs(a - b) / np.abs(b)) <= 1e-10


def test_series_radius_guard():
    with pytest.raises(ValueError):
        p_series(3, 0, 11.0)


def test_series_reduces_to_airy_taylor_d2():
    # d=2 series must agree with scipy Airy well inside the disk
    for z in (0.5, -1.5, 1j):
        got = p_series(2, 0, z).value(0).to_complex()
        assert got == pytest.approx(airy(complex(z))[0], rel=1e-12)


def test_series_coefficient_sparsity():
    # a_m = 0 whenever m = d (mod d+1): check via derivative stack at 0
    d = 3
    st = p_eval(d, 0, 0.0, max_deriv=d)
    assert abs(st.value(d).to_complex()) < 1e-15  # p^{(d)}(0) = 0 since a_d = 0


def test_asymptotic_deviation_decreases():
    for d in (2, 3):
        dev8 = asymptotic_check(d, 0, 8.0)
        dev16 = asymptotic_check(d, 0, 16.0)
        assert dev8 <= 2e-2
        assert dev16 < dev8


def test_asymptotic_prefactor_d2():
    # the d=2 prefactor is 1/(2 sqrt(pi)) * z^{-1/4}: deviation already small at 10
    assert asymptotic_check(2, 0, 10.0) < 5e-3


def test_asymptotic_sector_guard():
    with pytest.raises(ValueError):
        asymptotic_check(3, 0, 1.0)        # |z| too small


def test_recessive_ordering_on_real_axis():
    # along arg z = 0, p_0 is smallest; the ordering grows toward the list tail
    d = 3
    for x in (4.0, 8.0):
        mags = [p_eval(d, l, x).value(0).log_abs() for l in range(d + 1)]
        assert mags[0] == min(mags)
        assert mags[0] < mags[1] and mags[0] < mags[d]


def test_r_max_guard():
    with pytest.raises(ValueError):
        p_eval(3, 0, 60.0)


def test_mp_twin_matches_double():
    mp.dps = 30
    for d in (2, 3):
        for x in (0.5, 3.0, 7.5):
            ref = p_eval(d, 0, x, max_deriv=d - 1).as_complex()
            got = p0_stack_mp(d, x, d - 1, 30)
            for j in range(d):
                assert complex(got[j]) == pytest.approx(ref[j], rel=1e-11)
