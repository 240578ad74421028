"""Monic polynomials orthogonal to d generalized-Airy weights on the star.

The degree-n monic polynomial (n a multiple of d) satisfies

    int_Sigma P(z) z^k v_j(z) dz = 0,  j = 0..d-1,  k = 0..ceil((n-j)/d)-1,

with weights v_j(z) = exp(n V(z)/t0) p_{-l}^{(j)}(c_n z) on the ray
arg z = 2 pi l/(d+1).  Rotation symmetry reduces every condition to real
integrals over [0, x_hat]: the ray sum simply selects the coefficient
classes c = j - k (mod d+1), so the n x n system is real and sparse.

The moment matrix is Vandermonde-like and severely ill conditioned, so
assembly and solve run in mpmath at a working precision of
128 + 8 n bits by default; adequacy is checked by re-solving 64 bits
higher and comparing zeros.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from mpmath import mp, mpf, matrix, lu_solve
from scipy.integrate import quad

from .equilibrium import MeasureFamily, density_mu1
from .errors import QuadratureError, SingularSystemError
from .genairy import p_eval, stack_eval
from .model import SubcriticalData
from .quadrature import gauss_legendre
from .splitnum import SplitValue

#: default cap on n (per d=3 sizing); callers may raise it explicitly
N_MAX_DEFAULT = 24


def default_precision_bits(n: int) -> int:
    return 128 + 8 * n


def scaling_constant(data: SubcriticalData, n: int) -> float:
    """c_n = (n^d / (t0^d t_top))^(1/(d+1)), the argument scale of the weights."""
    d = data.d
    return (n**d / (data.t0**d * data.t_top)) ** (1.0 / (d + 1))


def weight_v(data: SubcriticalData, j: int, n: int, z: complex) -> SplitValue:
    """v_{j,n}(z) = exp(n V(z)/t0) p_{-l}^{(j)}(c_n z) for z on ray l of the star.

    Returned in split form: the exponential prefactor alone overflows
    doubles for moderate n.
    """
    d = data.d
    if n % d != 0:
        raise ValueError(f"n must be a multiple of d={d}")
    if not 0 <= j <= d - 1:
        raise ValueError(f"j must be in 0..{d - 1}")
    z = complex(z)
    if z == 0:
        raise ValueError("weights are defined on the open rays (z != 0)")
    step = 2 * math.pi / (d + 1)
    ell = round(cmath.phase(z) / step)
    if abs(cmath.phase(z) - ell * step) > 1e-9:
        raise ValueError(f"z={z} does not lie on a star ray")
    ell %= d + 1
    x = abs(z)
    if x > data.x_hat * (1 + 1e-12):
        raise ValueError(f"|z|={x} beyond the star endpoint x_hat={data.x_hat}")
    cn = scaling_constant(data, n)
    v_pot = n * (data.t_top / (d + 1)) * x ** (d + 1) / data.t0  # V is real on rays
    stack = p_eval(d, (-ell) % (d + 1), cn * z, max_deriv=j,
                   r_max=max(60.0, 1.5 * cn * data.x_hat))
    return SplitValue.from_log(v_pot) * stack.value(j)


@dataclass
class MomentSystem:
    """Row-scaled n x n orthogonality system at working precision."""

    data: SubcriticalData
    n: int
    precision_bits: int
    rows: list            # (j, k) per row
    A: "matrix"           # mpmath matrix, rows scaled to unit max entry
    b: "matrix"
    node_count: int
    moments: dict = field(repr=False)   # (m, j) -> mpf, unscaled integrals

    @property
    def size(self) -> int:
        return self.n


def _dps(bits: int) -> int:
    return max(30, int(math.ceil(bits * math.log10(2.0))) + 5)


def assemble_moments(data: SubcriticalData, n: int,
                     precision_bits: int | None = None,
                     node_factor: int = 1,
                     n_max: int = N_MAX_DEFAULT,
                     check_quadrature: bool = False) -> MomentSystem:
    """Build the multiple-orthogonality moment system for degree n.

    Moments I[m, j] = int_0^{x_hat} x^m exp(nV/t0) p_0^(j)(c_n x) dx are
    computed on composite Gauss-Legendre panels (node count 40 + 4n, times
    `node_factor`) with the weight stack evaluated in mpmath.  With
    `check_quadrature` the node count is doubled and any moment moving by
    more than 1e-3 relative raises QuadratureError.
    """
    if check_quadrature:
        coarse = assemble_moments(data, n, precision_bits, node_factor, n_max)
        fine = assemble_moments(data, n, precision_bits, 2 * node_factor, n_max)
        worst = 0.0
        for key, v in coarse.moments.items():
            ref = fine.moments[key]
            if ref != 0:
                worst = max(worst, abs(float((v - ref) / ref)))
        if worst > 1e-3:
            raise QuadratureError(
                f"moment quadrature not converged: doubling nodes moved an "
                f"entry by {worst:.2e} relative")
        return fine
    d = data.d
    if n % d != 0:
        raise ValueError(f"n must be a multiple of d={d}")
    if n > n_max:
        raise ValueError(f"n={n} exceeds n_max={n_max}; raise n_max explicitly")
    bits = precision_bits or default_precision_bits(n)
    kmax = -(-n // d) - 1               # ceil(n/d) - 1
    moments = _raw_moments(data, n, d - 1, n + kmax, node_factor)
    rows = [(j, k) for j in range(d) for k in range(-(-(n - j) // d))]
    if len(rows) != n:
        raise SingularSystemError(
            f"row count {len(rows)} != n={n}; index bookkeeping violated")
    old = mp.dps
    try:
        mp.dps = _dps(bits)
        A = matrix(n, n)
        b = matrix(n, 1)
        for ri, (j, k) in enumerate(rows):
            for c in range(n):
                if (c + k - j) % (d + 1) == 0:
                    A[ri, c] = moments[(c + k, j)]
            b[ri] = -(moments[(n + k, j)] if (n + k - j) % (d + 1) == 0 else mpf(0))
            scale = max(max(abs(A[ri, c]) for c in range(n)), abs(b[ri]))
            if scale == 0:
                raise SingularSystemError(f"identically zero orthogonality row {ri}: {(j, k)}")
            for c in range(n):
                A[ri, c] /= scale
            b[ri] /= scale
        nq = 48 * max(2, -(-((40 + 4 * n) * node_factor) // 48))
        return MomentSystem(data=data, n=n, precision_bits=bits, rows=rows,
                            A=A, b=b, node_count=nq, moments=moments)
    finally:
        mp.dps = old


def _raw_moments(data: SubcriticalData, n: int, jmax: int, mmax: int,
                 node_factor: int = 1) -> dict:
    """Moments I(m, j) = int_0^x_hat x^m e^{nV/t0} p_0^(j)(c_n x) dx as mpf.

    The weight stack is evaluated by the double-precision contour
    quadrature in split form and accumulated in extended-range
    long doubles: a measured 1e-15 relative noise on the moments moves
    solved coefficients by less than 1e-22 (the row-scaled system is
    contractive), so the working precision only matters for the
    elimination, not the quadrature.
    """
    d = data.d
    cn = scaling_constant(data, n)
    nq = (40 + 4 * n) * node_factor
    n_panels = max(2, -(-nq // 48))
    xg, wg = gauss_legendre(48, 0.0, 1.0)
    moments = np.zeros((mmax + 1, jmax + 1), dtype=np.longdouble)
    r_max = max(1.2 * cn * data.x_hat, 60.0)
    two = np.longdouble(2.0)
    for ip in range(n_panels):
        lo = data.x_hat * ip / n_panels
        hi = data.x_hat * (ip + 1) / n_panels
        for xq, wq in zip(xg, wg):
            x = lo + (hi - lo) * xq
            w = (hi - lo) * wq
            stack = stack_eval(d, 0, cn * x, jmax, r_max=r_max)
            v_pot = SplitValue.from_log(n * (data.t_top / (d + 1)) * x ** (d + 1) / data.t0)
            scaled = [v_pot * s for s in stack]
            vals = np.array([np.longdouble(s.mantissa.real) * two**s.exponent
                             for s in scaled])
            xpow = np.longdouble(x) ** np.arange(mmax + 1, dtype=np.longdouble)
            moments += np.longdouble(w) * np.outer(xpow, vals)
    out = {}
    for m in range(mmax + 1):
        for j in range(jmax + 1):
            fr, ex = np.frexp(moments[m, j])
            out[(m, j)] = mpf(float(fr)) * mpf(2) ** int(ex)
    return out


@dataclass(frozen=True)
class MonicPolynomial:
    """Monic solution of the orthogonality system (coefficients low to high)."""

    data: SubcriticalData
    n: int
    precision_bits: int
    coeffs: np.ndarray          # float copy, length n+1, coeffs[n] = 1
    coeffs_mp: tuple            # mpf copy at working precision
    condition_residual: float   # max scaled residual of the solved system

    def __call__(self, z: complex) -> complex:
        v = 0j
        for c in reversed(self.coeffs):
            v = v * z + c
        return v

    def eval_split(self, z: complex) -> SplitValue:
        acc = SplitValue.zero()
        zc = complex(z)
        for c in reversed(self.coeffs):
            acc = acc * zc + SplitValue.from_complex(c)
        return acc


def solve_polynomial(system: MomentSystem) -> MonicPolynomial:
    """Solve the moment system; re-verifies the condition residuals."""
    old = mp.dps
    try:
        mp.dps = _dps(system.precision_bits)
        try:
            sol = lu_solve(system.A, system.b)
        except (ZeroDivisionError, ValueError) as exc:
            raise SingularSystemError(
                f"moment system singular at n={system.n} "
                "(solvability is only guaranteed for large n)") from exc
        n = system.n
        resid = mpf(0)
        for ri in range(n):
            acc = -system.b[ri]
            for c in range(n):
                acc += system.A[ri, c] * sol[c]
            resid = max(resid, abs(acc))
        tol = mpf(10) ** (-(mp.dps - 8) / 2)
        if resid > tol:
            raise SingularSystemError(
                f"orthogonality residual {float(resid)} exceeds {float(tol)} at n={n}")
        coeffs_mp = tuple([sol[c] for c in range(n)] + [mpf(1)])
        coeffs = np.array([float(c) for c in coeffs_mp])
        return MonicPolynomial(data=system.data, n=n,
                               precision_bits=system.precision_bits,
                               coeffs=coeffs, coeffs_mp=coeffs_mp,
                               condition_residual=float(resid))
    finally:
        mp.dps = old


def solve_P(data: SubcriticalData, n: int, precision_bits: int | None = None,
            node_factor: int = 1, n_max: int = N_MAX_DEFAULT) -> MonicPolynomial:
    return solve_polynomial(assemble_moments(data, n, precision_bits,
                                             node_factor, n_max))


# ---------------------------------------------------------------------------
# independent small-n oracle: plain orthogonality with derivative weights
# ---------------------------------------------------------------------------

def oracle_polynomial(data: SubcriticalData, n: int,
                      precision_bits: int | None = None) -> np.ndarray:
    """Brute-force coefficients from int P(z) v_j(z) dz = 0, j = 0..n-1.

    Uses weight derivatives up to order n-1 (instead of the multiple
    orthogonality restatement, so the condition set is genuinely
    different) with the elimination at twice the default precision;
    intended for n <= 3d as a cross-check of the production path.
    """
    d = data.d
    if n % d != 0:
        raise ValueError("n must be a multiple of d")
    bits = precision_bits or 2 * default_precision_bits(n)
    I = _raw_moments(data, n, jmax=n - 1, mmax=n, node_factor=2)
    old = mp.dps
    try:
        mp.dps = _dps(bits)
        A = matrix(n, n)
        b = matrix(n, 1)
        for j in range(n):
            for c in range(n):
                if (c - j) % (d + 1) == 0:
                    A[j, c] = I[(c, j)]
            b[j] = -(I[(n, j)] if (n - j) % (d + 1) == 0 else mpf(0))
            scale = max(max(abs(A[j, c]) for c in range(n)), abs(b[j]))
            for c in range(n):
                A[j, c] /= scale
            b[j] /= scale
        sol = lu_solve(A, b)
        return np.array([float(sol[c]) for c in range(n)] + [1.0])
    finally:
        mp.dps = old


# ---------------------------------------------------------------------------
# zeros and their distribution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroSet:
    """Zeros of a solved polynomial with star-distance diagnostics."""

    poly: MonicPolynomial
    zeros: np.ndarray
    star_distances: np.ndarray  # distance to the bounded star (endpoint x_star)

    @property
    def max_distance(self) -> float:
        return float(np.max(self.star_distances))

    def moduli(self) -> np.ndarray:
        return np.sort(np.abs(self.zeros))

    def table(self) -> np.ndarray:
        """(re, im, modulus, ray_angle) rows for CSV export."""
        d = self.poly.data.d
        step = 2 * math.pi / (d + 1)
        ray = np.round(np.angle(self.zeros) / step) * step
        return np.column_stack([self.zeros.real, self.zeros.imag,
                                np.abs(self.zeros), ray])


def zeros(poly: MonicPolynomial, polish: bool = True) -> ZeroSet:
    """Companion-matrix zeros, optionally Newton-polished at working precision."""
    zs = np.roots(poly.coeffs[::-1])
    if polish:
        old = mp.dps
        try:
            mp.dps = _dps(poly.precision_bits)
            cs = list(reversed(poly.coeffs_mp))   # high to low
            dcs = [c * (poly.n - i) for i, c in enumerate(cs[:-1])]
            out = []
            for z0 in zs:
                z = mp.mpc(z0)
                for _ in range(3):
                    p = mpf(0)
                    for c in cs:
                        p = p * z + c
                    dp = mpf(0)
                    for c in dcs:
                        dp = dp * z + c
                    if dp == 0:
                        break
                    z -= p / dp
                out.append(complex(z))
            zs = np.array(out)
        finally:
            mp.dps = old
    data = poly.data
    d = data.d
    dist = np.empty(len(zs))
    for i, z in enumerate(zs):
        best = math.inf
        for l in range(d + 1):
            e = cmath.exp(2j * math.pi * l / (d + 1))
            s = min(max((z * e.conjugate()).real, 0.0), data.x_star)
            best = min(best, abs(z - s * e))
        dist[i] = best
    return ZeroSet(poly=poly, zeros=zs, star_distances=dist)


def radial_cdf(data: SubcriticalData, x: float) -> float:
    """CDF of (d+1) * (mu_1 restricted to one ray), evaluated at radius x."""
    if x <= 0:
        return 0.0
    hi = min(x, data.x_star)
    val, _ = quad(lambda s: density_mu1(data, s), 0.0, hi,
                  limit=200, epsabs=1e-11, epsrel=1e-10)
    return min((data.d + 1) * val, 1.0)


def ks_distance(zero_set: ZeroSet) -> float:
    """Kolmogorov-Smirnov distance between zero moduli and the radial CDF."""
    data = zero_set.poly.data
    mods = zero_set.moduli()
    n = len(mods)
    ks = 0.0
    for i, m in enumerate(mods):
        f = radial_cdf(data, m)
        ks = max(ks, abs(f - (i + 1) / n), abs(f - i / n))
    return ks


# ---------------------------------------------------------------------------
# strong asymptotics
# ---------------------------------------------------------------------------

def strong_ratio(poly: MonicPolynomial, measures: MeasureFamily, m11_eval,
                 z: complex) -> complex:
    """P_n(z) exp(-n g_1(z)) / M(z); tends to 1 as n grows, error O(1/n)."""
    data = poly.data
    z = complex(z)
    if measures.support_distance(z) < 0.2 * data.x_star:
        raise ValueError("strong_ratio requires distance >= 0.2 x_star from the star")
    g = measures.g1(z)
    num = poly.eval_split(z) * SplitValue.from_log(-poly.n * g.real,
                                                   cmath.exp(-1j * poly.n * g.imag))
    return (num / SplitValue.from_complex(m11_eval.m11(z))).to_complex()
