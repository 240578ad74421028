"""Overflow-safe (mantissa, power-of-two exponent) scalars.

Factors like exp(n*V/t0) overflow IEEE doubles long before the model does
anything interesting, so weight-scale quantities are carried as
mantissa * 2^exponent with a complex mantissa normalized to |m| in [1, 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_LOG2E = 1.0 / math.log(2.0)


@dataclass(frozen=True)
class SplitValue:
    """value = mantissa * 2^exponent, |mantissa| in [1, 2) unless zero."""

    mantissa: complex
    exponent: int

    # -- construction ------------------------------------------------------

    @staticmethod
    def zero() -> "SplitValue":
        return SplitValue(0j, 0)

    @staticmethod
    def from_complex(v: complex) -> "SplitValue":
        return _normalize(complex(v), 0)

    @staticmethod
    def from_log(log_value: float, phase: complex = 1.0) -> "SplitValue":
        """exp(log_value) * phase, for |log_value| far beyond double range."""
        e = int(math.floor(log_value * _LOG2E))
        m = math.exp(log_value - e / _LOG2E) * complex(phase)
        return _normalize(m, e)

    # -- arithmetic ----------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, SplitValue):
            return _normalize(self.mantissa * other.mantissa, self.exponent + other.exponent)
        return _normalize(self.mantissa * complex(other), self.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SplitValue):
            if other.mantissa == 0:
                raise ZeroDivisionError("division by zero SplitValue")
            return _normalize(self.mantissa / other.mantissa, self.exponent - other.exponent)
        return _normalize(self.mantissa / complex(other), self.exponent)

    def __add__(self, other):
        if not isinstance(other, SplitValue):
            other = SplitValue.from_complex(other)
        if self.mantissa == 0:
            return other
        if other.mantissa == 0:
            return self
        hi, lo = (self, other) if self.exponent >= other.exponent else (other, self)
        shift = lo.exponent - hi.exponent
        if shift < -2000:
            return hi
        return _normalize(hi.mantissa + lo.mantissa * 2.0**shift, hi.exponent)

    def __neg__(self):
        return SplitValue(-self.mantissa, self.exponent)

    def __sub__(self, other):
        if not isinstance(other, SplitValue):
            other = SplitValue.from_complex(other)
        return self + (-other)

    def conjugate(self) -> "SplitValue":
        return SplitValue(self.mantissa.conjugate(), self.exponent)

    # -- queries -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.mantissa == 0

    def log_abs(self) -> float:
        """Natural log of |value| (-inf for zero)."""
        if self.mantissa == 0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exponent * math.log(2.0)

    def to_complex(self) -> complex:
        """Collapse to a complex double; raises OverflowError if out of range."""
        if self.mantissa == 0:
            return 0j
        if self.exponent > 1020:
            raise OverflowError(f"SplitValue exponent {self.exponent} exceeds double range")
        if self.exponent < -1060:
            return 0j
        return self.mantissa * 2.0**self.exponent

    def __abs__(self) -> float:
        try:
            return abs(self.to_complex())
        except OverflowError:
            return math.inf


def _normalize(m: complex, e: int) -> SplitValue:
    if m == 0:
        return SplitValue(0j, 0)
    a = abs(m)
    if not math.isfinite(a):
        raise OverflowError("non-finite mantissa in SplitValue")
    shift = int(math.floor(math.log2(a)))
    return SplitValue(m * 2.0**(-shift), e + shift)
