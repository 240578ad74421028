import math

import pytest

from stardrop.splitnum import SplitValue


def test_roundtrip():
    for v in (1.0, -3.25, 1e300, 1e-300, 2.5 + 1.75j):
        s = SplitValue.from_complex(v)
        assert s.to_complex() == pytest.approx(complex(v), rel=1e-15)
        assert 1.0 <= abs(s.mantissa) < 2.0


def test_from_log_extreme():
    s = SplitValue.from_log(5000.0)
    assert s.log_abs() == pytest.approx(5000.0, rel=1e-14)
    with pytest.raises(OverflowError):
        s.to_complex()
    tiny = SplitValue.from_log(-5000.0)
    assert tiny.to_complex() == 0j          # underflow collapses to zero
    assert tiny.log_abs() == pytest.approx(-5000.0, rel=1e-14)


def test_arithmetic():
    a = SplitValue.from_log(2000.0, 1 + 1j)
    b = SplitValue.from_log(1990.0)
    prod = a * b
    assert prod.log_abs() == pytest.approx(3990.0 + math.log(abs(1 + 1j)), rel=1e-12)
    quot = a / b
    assert quot.to_complex() == pytest.approx(math.exp(10.0) * (1 + 1j), rel=1e-12)
    tot = a + b
    assert tot.log_abs() == pytest.approx(
        2000.0 + math.log(abs(1 + 1j + math.exp(-10.0))), rel=1e-12)
    assert (a - a).is_zero
    assert (-a + a).is_zero


def test_add_disparate_scales():
    big = SplitValue.from_log(0.0)
    small = SplitValue.from_log(-3000.0)
    assert (big + small).to_complex() == pytest.approx(1.0)


def test_zero_behaviour():
    z = SplitValue.zero()
    one = SplitValue.from_complex(1.0)
    assert (z + one).to_complex() == 1.0
    assert (z * one).is_zero
    assert z.log_abs() == -math.inf
    with pytest.raises(ZeroDivisionError):
        one / z


def test_conjugate():
    s = SplitValue.from_complex(3 + 4j)
    assert s.conjugate().to_complex() == pytest.approx(3 - 4j)
