"""Problem parameters and the scalar critical quantities of the subcritical regime.

The model is fixed by an integer d >= 2, a time parameter t0 > 0 and the
leading potential coefficient t_top > 0 (the coefficient of z^{d+1}/(d+1)).
Everything downstream (conformal radius r, star endpoint x_star, branch
parameter rho, droplet, spectral curve, ...) is a function of these three
numbers; this module computes the scalar ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import SupercriticalError

#: relative tolerance accepted on the defining residual of r
_R_RTOL = 5e-15


def critical_time(d: int, t_top: float) -> float:
    """Largest t0 for which the subcritical description is valid.

    Equal to the maximum of r^2 - d*t_top^2*r^(2d) over r >= 0, which is
    attained at r_crit = (d*t_top)^(-1/(d-1)).
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if t_top <= 0:
        raise ValueError(f"t_top must be positive, got {t_top}")
    return (d ** (-2.0 / (d - 1)) - d ** (-(d + 1.0) / (d - 1))) * t_top ** (-2.0 / (d - 1))


def r_crit(d: int, t_top: float) -> float:
    """Location of the maximum of r^2 - d*t_top^2*r^(2d)."""
    if d < 2 or t_top <= 0:
        raise ValueError("need d >= 2 and t_top > 0")
    return (d * t_top) ** (-1.0 / (d - 1))


def solve_r(d: int, t0: float, t_top: float) -> float:
    """Smallest positive root r of  t0 = r^2 - d*t_top^2*r^(2d).

    The function r -> r^2 - d*t_top^2*r^(2d) increases from 0 to t0_crit on
    [0, r_crit], so the root is bracketed there.  Bisection brings the
    bracket down to a safe width, then Newton polishes; this guarantees the
    increasing branch regardless of the initial guess.
    """
    if t0 < 0:
        raise ValueError(f"t0 must be nonnegative, got {t0}")
    t0c = critical_time(d, t_top)
    if t0 > t0c * (1 + 1e-12):
        raise SupercriticalError(
            f"t0={t0} exceeds critical time {t0c} for d={d}, t_top={t_top}"
        )
    if t0 == 0:
        return 0.0
    rc = r_crit(d, t_top)
    if t0 >= t0c:
        return rc

    def f(r: float) -> float:
        return r * r - d * t_top**2 * r ** (2 * d) - t0

    lo, hi = 0.0, rc
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    r = 0.5 * (lo + hi)
    for _ in range(8):
        df = 2 * r - 2 * d * d * t_top**2 * r ** (2 * d - 1)
        if df == 0:
            break
        step = f(r) / df
        r -= step
        if abs(step) < 1e-17 * max(r, 1e-300):
            break
    r = min(max(r, 0.0), rc)
    if abs(f(r)) > _R_RTOL * max(t0, r * r) * 10:
        raise ArithmeticError(f"r root polish failed: residual {f(r)}")
    return r


def x_star(d: int, t0: float, t_top: float) -> float:
    """Endpoint of the star supporting the first equilibrium measure."""
    r = solve_r(d, t0, t_top)
    return (d + 1) * d ** (-d / (d + 1.0)) * t_top ** (1.0 / (d + 1)) * r ** (2.0 * d / (d + 1))


def rho(d: int, t0: float, t_top: float) -> float:
    """Branch-point parameter (d*t_top*r^(d-1))^(1/(d+1)); equals 1 only at t0_crit."""
    r = solve_r(d, t0, t_top)
    return (d * t_top * r ** (d - 1)) ** (1.0 / (d + 1))


@dataclass(frozen=True)
class ModelParams:
    """Validated problem input (d, t0, t_top) plus the star endpoint x_hat.

    x_hat defaults to 1.02 * x_star.  Values below x_star are invalid;
    values above 1.1 * x_star are rejected because the variational
    inequality is only guaranteed slightly beyond the endpoint (the module
    `equilibrium` re-checks Re phi1(x_hat) < 0 at runtime).
    """

    d: int
    t0: float
    t_top: float
    x_hat: float | None = None
    x_hat_factor_max: float = field(default=1.1, repr=False)

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"d must be an integer >= 2, got {self.d}")
        if self.t0 <= 0 or self.t_top <= 0:
            raise ValueError("t0 and t_top must be positive")
        t0c = critical_time(self.d, self.t_top)
        if self.t0 >= t0c:
            raise SupercriticalError(
                f"subcritical regime requires t0 < {t0c}, got t0={self.t0}"
            )
        xs = x_star(self.d, self.t0, self.t_top)
        if self.x_hat is None:
            object.__setattr__(self, "x_hat", 1.02 * xs)
        else:
            if not (xs < self.x_hat <= self.x_hat_factor_max * xs):
                raise ValueError(
                    f"x_hat must lie in (x_star, {self.x_hat_factor_max}*x_star] "
                    f"= ({xs}, {self.x_hat_factor_max * xs}], got {self.x_hat}"
                )

    @property
    def t0_crit(self) -> float:
        return critical_time(self.d, self.t_top)


@dataclass(frozen=True)
class SubcriticalData:
    """Derived scalar data of a subcritical model."""

    params: ModelParams
    r: float
    x_star: float
    rho: float
    a: float
    t0_crit: float

    @classmethod
    def from_params(cls, params: ModelParams) -> "SubcriticalData":
        d, t0, tt = params.d, params.t0, params.t_top
        r = solve_r(d, t0, tt)
        data = cls(
            params=params,
            r=r,
            x_star=x_star(d, t0, tt),
            rho=(d * tt * r ** (d - 1)) ** (1.0 / (d + 1)),
            a=tt * r**d,
            t0_crit=critical_time(d, tt),
        )
        # a < r/d in the strict subcritical regime
        if not data.a < r / d:
            raise SupercriticalError("derived data violates a < r/d; t0 too close to critical")
        return data

    @classmethod
    def compute(cls, d: int, t0: float, t_top: float, x_hat: float | None = None) -> "SubcriticalData":
        return cls.from_params(ModelParams(d, t0, t_top, x_hat))

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def t0(self) -> float:
        return self.params.t0

    @property
    def t_top(self) -> float:
        return self.params.t_top

    @property
    def x_hat(self) -> float:
        return self.params.x_hat

    def residual(self) -> float:
        """Defining residual r^2 - d*t_top^2*r^(2d) - t0 (should be ~ulp(t0))."""
        d, tt = self.d, self.t_top
        return self.r**2 - d * tt**2 * self.r ** (2 * d) - self.t0


def omega(d: int) -> complex:
    """Primitive (d+1)-st root of unity."""
    return complex(math.cos(2 * math.pi / (d + 1)), math.sin(2 * math.pi / (d + 1)))
