"""The genus-zero spectral surface: conformal map, ordered branches, sectors.

The surface is parametrized by w through

    z   = psi(w)  = r*w + t_top*r^d / w^d,
    xi  = psi(1/w) = r/w + t_top*r^d * w^d.

For fixed z the w-values solve the cleared polynomial
r*w^(d+1) - z*w^d + t_top*r^d = 0, whose d+1 roots are labeled by
non-increasing modulus.  The k-th sheet function is xi_k(z) = psi(1/w_k(z)).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BranchAmbiguityWarning, SectorBoundaryError
from .model import SubcriticalData

#: tolerance (radians) below which a point counts as lying on a sector boundary
SECTOR_EDGE_TOL = 1e-12
#: modulus tie tolerance (relative) for the cut warning in xi()
TIE_RTOL = 1e-9


def psi(data: SubcriticalData, w):
    """Conformal map r*w + a/w^d (a = t_top * r^d).  Pole at w=0."""
    w = np.asarray(w, dtype=complex) if np.ndim(w) else complex(w)
    if np.any(np.asarray(w) == 0):
        raise ZeroDivisionError("psi has a pole at w = 0")
    return data.r * w + data.a / w**data.d


def psi_prime(data: SubcriticalData, w):
    w = np.asarray(w, dtype=complex) if np.ndim(w) else complex(w)
    return data.r - data.d * data.a / w ** (data.d + 1)


@dataclass(frozen=True)
class BranchSet:
    """The d+1 ordered solutions w_k(z) and their xi values at one point z."""

    z: complex
    w: np.ndarray   # sorted by non-increasing |w|
    xi: np.ndarray  # xi[k] = psi(1/w[k])

    def residuals(self, data: SubcriticalData) -> np.ndarray:
        """|r w^{d+1} - z w^d + a| for each root, unnormalized."""
        d = data.d
        return np.abs(data.r * self.w ** (d + 1) - self.z * self.w**d + data.a)


def branches(data: SubcriticalData, z: complex) -> BranchSet:
    """All d+1 branches at z, companion-matrix roots plus Newton polish.

    Ordering is by non-increasing modulus; exact ties are broken by
    increasing phase in (-pi, pi] so the labeling is deterministic on cuts.
    """
    d = data.d
    z = complex(z)
    coeff = np.zeros(d + 2, dtype=complex)
    coeff[0] = data.r
    coeff[1] = -z
    coeff[-1] = data.a
    w = np.roots(coeff)
    for _ in range(2):
        p = data.r * w ** (d + 1) - z * w**d + data.a
        dp = (d + 1) * data.r * w**d - d * z * w ** (d - 1)
        mask = dp != 0
        w[mask] -= p[mask] / dp[mask]
    order = np.lexsort((np.angle(w), -np.abs(w)))
    w = w[order]
    xi = data.r / w + data.a * w**d
    return BranchSet(z=z, w=w, xi=xi)


def branches_many(data: SubcriticalData, zs: np.ndarray) -> np.ndarray:
    """Vectorized branches: (N, d+1) roots sorted by non-increasing modulus.

    Batched companion-matrix eigenvalues plus two Newton sweeps; the
    deterministic phase tie-break of branches() is skipped (callers supply
    points off the cuts, where the ordering is strict).
    """
    d = data.d
    zs = np.asarray(zs, dtype=complex).ravel()
    n = len(zs)
    comp = np.zeros((n, d + 1, d + 1), dtype=complex)
    comp[:, 0, 0] = zs / data.r
    comp[:, 0, -1] = -data.a / data.r
    idx = np.arange(d)
    comp[:, idx + 1, idx] = 1.0
    w = np.linalg.eigvals(comp)
    for _ in range(2):
        p = data.r * w ** (d + 1) - zs[:, None] * w**d + data.a
        dp = (d + 1) * data.r * w**d - d * zs[:, None] * w ** (d - 1)
        mask = dp != 0
        w[mask] -= (p / dp)[mask]
    order = np.argsort(-np.abs(w), axis=1, kind="stable")
    return np.take_along_axis(w, order, axis=1)


def xi(data: SubcriticalData, z: complex, k: int) -> complex:
    """Branch value xi_k(z) = psi(1/w_k(z)), k = 1..d+1 (1-based).

    Warns if |w_k| and |w_{k+1}| (or |w_{k-1}|) tie within tolerance, i.e.
    the point sits on a cut and the label is ambiguous.
    """
    if not 1 <= k <= data.d + 1:
        raise ValueError(f"branch index k must be in 1..{data.d + 1}, got {k}")
    bs = branches(data, z)
    mods = np.abs(bs.w)
    i = k - 1
    scale = mods[i]
    for j in (i - 1, i + 1):
        if 0 <= j <= data.d and abs(mods[i] - mods[j]) <= TIE_RTOL * scale:
            warnings.warn(
                f"branches {min(i, j) + 1} and {max(i, j) + 1} tie in modulus at z={z}; "
                "point lies on a cut",
                BranchAmbiguityWarning,
                stacklevel=2,
            )
            break
    return complex(bs.xi[i])


# ---------------------------------------------------------------------------
# sectors and the kappa constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sector:
    """Half-sector label: index ell (mod d+1) and sign +1/-1."""

    ell: int
    sign: int


def sector_of(d: int, z: complex, tol: float = SECTOR_EDGE_TOL) -> Sector:
    """Resolve which half-sector S_ell^{+-} contains z.

    S_ell^+ = (2*ell*pi/(d+1), (2*ell+1)*pi/(d+1)),
    S_ell^- = ((2*ell-1)*pi/(d+1), 2*ell*pi/(d+1)), using arg in (-pi, pi].
    Points within `tol` radians of a boundary (the rays of the two unbounded
    stars) raise SectorBoundaryError.
    """
    if z == 0:
        raise SectorBoundaryError("z = 0 lies on every sector boundary")
    th = cmath.phase(z)
    h = math.pi / (d + 1)
    nearest = round(th / h)
    if abs(th - nearest * h) < tol:
        raise SectorBoundaryError(
            f"arg z = {th} is within {tol} of sector boundary ray {nearest}*pi/{d + 1}"
        )
    m = math.floor(th / h)
    if m % 2 == 0:
        return Sector(ell=m // 2, sign=+1)
    return Sector(ell=(m + 1) // 2, sign=-1)


@dataclass(frozen=True)
class KappaTable:
    """Leading coefficients kappa_{k,ell}^{+-} of xi_k ~ kappa z^{1/d} at infinity."""

    d: int
    t_top: float

    def value(self, k: int, ell: int, sign: int) -> complex:
        if not 2 <= k <= self.d + 1:
            raise ValueError(f"k must be in 2..{self.d + 1}, got {k}")
        if sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")
        omega_d = cmath.exp(2j * math.pi / self.d)
        e = (-1) ** k * ((k - 1) // 2)
        return omega_d ** (-ell + sign * e) * self.t_top ** (-1.0 / self.d)

    def entries(self):
        """Iterate (k, ell, sign, value) over the canonical index windows."""
        d = self.d
        for k in range(2, d + 2):
            for ell in range(-math.ceil(d / 2), d // 2 + 1):
                yield k, ell, +1, self.value(k, ell, +1)
            for ell in range(-(d // 2), math.ceil(d / 2) + 1):
                yield k, ell, -1, self.value(k, ell, -1)


def kappa_table(d: int, t_top: float) -> KappaTable:
    return KappaTable(d=d, t_top=t_top)


def eta(data: SubcriticalData, z: complex, k: int) -> complex:
    """xi_k(z) - kappa_{k,ell}^{+-} z^{1/d} with the principal branch of z^{1/d}.

    Decays like -(t0/d)/z at infinity.  Requires k >= 2 and z off the
    unbounded stars (sector boundaries).
    """
    if k < 2:
        raise ValueError("eta is defined for k >= 2")
    sec = sector_of(data.d, z)
    kap = kappa_table(data.d, data.t_top).value(k, sec.ell, sec.sign)
    return xi(data, z, k) - kap * complex(z) ** (1.0 / data.d)


def boundary_pair(data: SubcriticalData, func, s: float, theta: float,
                  delta: float = 1e-7):
    """One-sided boundary values (minus, plus) of func on the ray arg z = theta.

    func(z) is evaluated at angular offsets +-delta and +-delta/2 and
    Richardson-extrapolated to the ray.  The plus side is the side of
    larger angle (left of the outward orientation).
    """
    def at(sign_side, dl):
        return func(s * cmath.exp(1j * (theta + sign_side * dl)))

    minus = 2 * at(-1, delta / 2) - at(-1, delta)
    plus = 2 * at(+1, delta / 2) - at(+1, delta)
    return minus, plus
