"""The algebraic (spectral) curve satisfied by the branch functions.

P(z, xi) = xi^{d+1} + z^{d+1} - sum_k c_k z^k xi^k + beta = 0.

Substituting the rational parametrization z = r w + a/w^d,
xi = r/w + a w^d turns P into a Laurent polynomial in w whose coefficients
are linear in (c_1..c_d, beta).  Only exponents divisible by d+1 appear,
giving 2d+1 equations for d+1 unknowns; the least-squares residual of the
surplus equations is a structural check.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf

from .model import SubcriticalData
from .surface import branches

#: residual bound above which the overdetermined solve is declared inconsistent
STRUCTURE_TOL = 1e-10


@dataclass(frozen=True)
class SpectralCurve:
    """Coefficients of the degree-(d+1) curve; all positive when subcritical."""

    d: int
    r: float
    t_top: float
    c: np.ndarray       # c[k-1] = c_k, k = 1..d
    beta: float
    lstsq_residual: float

    def evaluate(self, z: complex, xi: complex) -> complex:
        d = self.d
        val = xi ** (d + 1) + z ** (d + 1) + self.beta
        for k in range(1, d + 1):
            val -= self.c[k - 1] * z**k * xi**k
        return val


def _laurent_pow(base: dict[int, float], k: int) -> dict[int, float]:
    out = {0: 1.0}
    for _ in range(k):
        nxt = defaultdict(float)
        for e1, c1 in out.items():
            for e2, c2 in base.items():
                nxt[e1 + e2] += c1 * c2
        out = dict(nxt)
    return out


def compute_curve(data: SubcriticalData, dps: int = 40) -> SpectralCurve:
    """Extract (c_1..c_d, beta) by Laurent expansion and least squares.

    Exponents are exact integers; only exponents divisible by d+1 carry
    nonzero coefficients.  The small overdetermined system is solved by QR
    at `dps` digits: the conditioning mixes scales r^k a^j, and a plain
    double solve was measured to lose ~5 digits on the coefficients.
    """
    d = data.d
    old = mp.dps
    try:
        mp.dps = dps
        r, a = mpf(data.r), mpf(data.a)
        zp = {1: r, -d: a}
        xp = {-1: r, d: a}
        const = defaultdict(mpf)
        for e, c in _laurent_pow(xp, d + 1).items():
            const[e] += c
        for e, c in _laurent_pow(zp, d + 1).items():
            const[e] += c
        cols = []
        for k in range(1, d + 1):
            zk = _laurent_pow(zp, k)
            xk = _laurent_pow(xp, k)
            zx = defaultdict(mpf)
            for e1, c1 in zk.items():
                for e2, c2 in xk.items():
                    zx[e1 + e2] += c1 * c2
            cols.append(dict(zx))
        exps = sorted(set(const) | {e for col in cols for e in col} | {0})
        # the c_k column only reaches exponents |e| <= k(d+1): the rows at
        # e = m(d+1), m = d..1, are triangular in c_d..c_1; e = 0 gives beta
        sol = [mpf(0)] * (d + 1)
        for m in range(d, 0, -1):
            e = m * (d + 1)
            acc = const.get(e, mpf(0))
            for k in range(m + 1, d + 1):
                acc -= sol[k - 1] * cols[k - 1].get(e, mpf(0))
            pivot = cols[m - 1].get(e, mpf(0))
            if pivot == 0:
                raise ArithmeticError(f"degenerate triangular pivot at exponent {e}")
            sol[m - 1] = acc / pivot
        beta = -const.get(0, mpf(0))
        for k in range(1, d + 1):
            beta += sol[k - 1] * cols[k - 1].get(0, mpf(0))
        sol[d] = beta
        # unused (negative-exponent) equations: structure check
        resid = mpf(0)
        for e in exps:
            if e >= 0 and e % (d + 1) == 0 and e <= d * (d + 1):
                continue
            acc = const.get(e, mpf(0)) + (sol[d] if e == 0 else mpf(0))
            for k in range(1, d + 1):
                acc -= sol[k - 1] * cols[k - 1].get(e, mpf(0))
            resid = max(resid, abs(acc))
        scale = max(mpf(1), max(abs(v) for v in const.values()))
        if resid > STRUCTURE_TOL * scale:
            raise ArithmeticError(
                f"curve extraction inconsistent: residual {float(resid)} exceeds tolerance")
        return SpectralCurve(d=d, r=data.r, t_top=data.t_top,
                             c=np.array([float(sol[k]) for k in range(d)]),
                             beta=float(sol[d]),
                             lstsq_residual=float(resid))
    finally:
        mp.dps = old


def beta_closed_form(data: SubcriticalData) -> float:
    """beta = ((r^2 - a^2)/r)^{d+1} * (r/a), requiring a < r."""
    r, a, d = data.r, data.a, data.d
    if a >= r:
        raise ValueError(f"closed form requires a = t_top*r^d < r, got a={a}, r={r}")
    return ((r * r - a * a) / r) ** (d + 1) * (r / a)


def curve_residual(data: SubcriticalData, curve: SpectralCurve,
                   z: complex, k: int) -> float:
    """|P(z, xi_k(z))| / (1 + |z|)^{d+1} for branch k (1-based)."""
    xi_k = branches(data, z).xi[k - 1]
    return abs(curve.evaluate(z, xi_k)) / (1.0 + abs(z)) ** (data.d + 1)


def lower_branch_elementary_coeffs(data: SubcriticalData, jmax: int = 3,
                                   radius_factor: float = 5.0,
                                   n_samples: int = 1024) -> np.ndarray:
    """Laurent coefficients b[j][k] of (-1)^k e_k(xi_2..xi_{d+1}), k = 1..d.

    (-1)^k e_k = z^{-k} * sum_j b_{j,k} z^{-j(d+1)}; coefficients are
    extracted by Fourier inversion on the circle |z| = radius_factor*x_star.
    Rows j = 0..jmax, columns k = 1..d.
    """
    d = data.d
    R = radius_factor * data.x_star
    theta = np.linspace(0.0, 2 * math.pi, n_samples, endpoint=False)
    zs = R * np.exp(1j * theta)
    ek_vals = np.empty((n_samples, d), dtype=complex)
    for i, z in enumerate(zs):
        lower = branches(data, z).xi[1:]
        # elementary symmetric via the monic polynomial with those roots
        poly = np.poly(lower)   # length d+1, poly[k] = (-1)^k e_k
        ek_vals[i] = poly[1:]
    out = np.empty((jmax + 1, d))
    for k in range(1, d + 1):
        h = ek_vals[:, k - 1] * zs**k      # = sum_j b_{j,k} z^{-j(d+1)}
        for j in range(jmax + 1):
            coeff = np.mean(h * np.exp(1j * j * (d + 1) * theta)) * R ** (j * (d + 1))
            out[j, k - 1] = coeff.real
    return out
