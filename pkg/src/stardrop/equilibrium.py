"""Densities, masses, potentials and Cauchy transforms of the equilibrium family.

The d measures live on rotationally symmetric stars: mu_1 on the bounded
(d+1)-star with endpoint x_star, mu_k (k >= 2) on the unbounded stars whose
rays alternate between arg z = 2m pi/(d+1) (odd k) and
arg z = (2m+1) pi/(d+1) (even k).  Rotational invariance means every
quantity is a single quadrature over a reference ray plus an explicit sum
over the d+1 rotated copies.

Densities come straight from the surface branches: the mu_1 density is
Im xi_{1,-}/(pi t0) on (0, x_star); for k >= 2 it is the jump of eta_k
across the ray.  Unbounded-ray integrals are truncated at s_max and closed
with a fitted two-term algebraic tail (exponents -2-1/d and -3-2/d, from
the large-z expansion of the branches).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import BranchAmbiguityWarning, NearSupportWarning, QuadratureError
from .model import SubcriticalData
from .quadrature import edge_flattening_grid, gauss_legendre
from .surface import branches, branches_many, boundary_pair, eta, kappa_table, psi, sector_of

#: adaptive-quadrature tolerances for 1-D integrals against the densities
_EPSABS = 1e-12
_EPSREL = 1e-11
#: distance (relative to x_star) below which potential evaluation warns
NEAR_SUPPORT_DIST = 1e-6


def density_mu1(data: SubcriticalData, x: float) -> float:
    """Density of the first measure at x in (0, x_star), w.r.t. arclength.

    Equals Im xi_{1,-}(x) / (pi t0), where the minus boundary value is the
    largest-modulus branch with Im psi(1/w) > 0.
    """
    if not 0 < x < data.x_star:
        raise ValueError(f"x must be in (0, x_star={data.x_star}), got {x}")
    bs = branches(data, x)
    v0, v1 = bs.xi[0], bs.xi[1]
    v = v0 if v0.imag > 0 else v1
    if v.imag <= 0:
        raise QuadratureError(f"boundary-value resolution failed at x={x}")
    return v.imag / (math.pi * data.t0)


def reference_angle(d: int, k: int) -> float:
    """Angle of the reference ray of Sigma_k (0 for odd k, pi/(d+1) for even)."""
    return math.pi / (d + 1) if k % 2 == 0 else 0.0


def density_muk(data: SubcriticalData, k: int, s: float, delta: float = 1e-7) -> float:
    """Density of mu_k (k = 2..d) at ray coordinate s > 0, w.r.t. arclength.

    Computed as the jump (eta_{k,-} - eta_{k,+})/(2 pi i t0) times the ray
    direction, via angular offset plus Richardson extrapolation.
    """
    if not 2 <= k <= data.d:
        raise ValueError(f"k must be in 2..{data.d}, got {k}")
    if s <= 0:
        raise ValueError("ray coordinate s must be positive")
    th = reference_angle(data.d, k)
    with warnings.catch_warnings():
        # near z = 0 all branch moduli tie; the jump of eta is still well
        # defined through the one-sided offsets
        warnings.simplefilter("ignore", BranchAmbiguityWarning)
        minus, plus = boundary_pair(data, lambda z: eta(data, z, k), s, th, delta=delta)
    val = (minus - plus) / (2j * math.pi * data.t0) * cmath.exp(1j * th)
    if abs(val.imag) > 1e-8 * (1 + abs(val.real)):
        raise QuadratureError(f"density of mu_{k} not real at s={s}: {val}")
    return val.real


def density_mu1_many(data: SubcriticalData, xs: np.ndarray) -> np.ndarray:
    """Vectorized density of mu_1 on (0, x_star)."""
    w = branches_many(data, xs)[:, :2]
    vals = data.r / w + data.a * w**data.d
    im = np.where(vals[:, 0].imag > 0, vals[:, 0].imag, vals[:, 1].imag)
    if np.any(im <= 0):
        raise QuadratureError("boundary-value resolution failed on the grid")
    return im / (math.pi * data.t0)


def density_muk_many(data: SubcriticalData, k: int, s: np.ndarray,
                     delta: float = 1e-7) -> np.ndarray:
    """Vectorized density of mu_k (k >= 2) on its reference ray."""
    d = data.d
    s = np.asarray(s, dtype=float).ravel()
    th = reference_angle(d, k)
    kt = kappa_table(d, data.t_top)
    offs = np.array([-delta, -delta / 2, delta / 2, delta])
    pts = s[:, None] * np.exp(1j * (th + offs))[None, :]
    flat = pts.ravel()
    w = branches_many(data, flat)[:, k - 1]
    xi_k = data.r / w + data.a * w**data.d
    kap = np.array([kt.value(k, *_sector_fast(d, th + o)) for o in offs])
    eta_k = (xi_k.reshape(len(s), 4) - kap[None, :] * flat.reshape(len(s), 4) ** (1.0 / d))
    minus = 2 * eta_k[:, 1] - eta_k[:, 0]
    plus = 2 * eta_k[:, 2] - eta_k[:, 3]
    val = (minus - plus) / (2j * math.pi * data.t0) * cmath.exp(1j * th)
    if np.any(np.abs(val.imag) > 1e-7 * (1 + np.abs(val.real))):
        raise QuadratureError(f"density of mu_{k} not real on the grid")
    return val.real


def _sector_fast(d: int, angle: float):
    m = math.floor(angle / (math.pi / (d + 1)))
    return (m // 2, +1) if m % 2 == 0 else ((m + 1) // 2, -1)


@dataclass(frozen=True)
class PotentialEval:
    """Logarithmic potentials and Cauchy transforms of all d measures at z."""

    z: complex
    U: np.ndarray  # U[k-1] = U^{mu_k}(z)
    F: np.ndarray  # F[k-1] = F_k(z)


@dataclass(frozen=True)
class VariationalReport:
    """Residuals of the equilibrium variational conditions."""

    ell1: float
    eq1_max: float                 # max |equality residual| for mu_1
    ineq_max: float                # max of (LHS - ell1) on (x_star, x_hat]; must be < 0
    eqk_max: dict[int, float]      # k -> max residual of 2U_k - U_{k-1} - U_{k+1}

    @property
    def ok(self) -> bool:
        return self.eq1_max <= 1e-6 and self.ineq_max < 0 and \
            all(v <= 1e-6 for v in self.eqk_max.values())


class MeasureFamily:
    """Sampled equilibrium measures with quadrature-backed evaluations.

    Construction samples each density on cached grids (edge-flattening on
    the bounded star, double-exponential on (0, s_max] for the unbounded
    ones), fits the algebraic tails, computes the masses and checks
    Re phi1(x_hat) < 0, which is what certifies the configured x_hat.
    """

    def __init__(self, data: SubcriticalData, n_mu1: int = 240, n_muk: int = 600,
                 s_max: float | None = None, check_x_hat: bool = True):
        self.data = data
        d = data.d
        self.s_max = s_max if s_max is not None else 1000.0 * data.x_star
        self._p1 = 2.0 + 1.0 / d   # leading tail exponent of every mu_k, k>=2
        self._p2 = 3.0 + 2.0 / d

        x1, w1 = edge_flattening_grid(data.x_star, n_mu1)
        self._grid = {1: (x1, w1 * density_mu1_many(data, x1))}
        self._tail = {}
        self._origin_fit = {}

        # near s = 0 the density behaves like rho0 - c s^{1/d}; below s_lo the
        # branch ties at the origin make direct evaluation noisy, so the local
        # model takes over there
        self._s_lo = 1e-5 * data.x_star
        for k in range(1, d + 1):
            s1, s2 = self._s_lo, 16.0 * self._s_lo
            r1, r2 = self._density_on_raw(k, np.array([s1, s2]))
            c = (r2 - r1) / (s2 ** (1.0 / d) - s1 ** (1.0 / d))
            self._origin_fit[k] = (r1 - c * s1 ** (1.0 / d), c)

        for k in range(2, d + 1):
            u, du = _tanh_sinh(n_muk)
            s = self.s_max * u
            self._grid[k] = (s, du * self.s_max * self._density_on(k, s))
            self._tail[k] = self._fit_tail(k)

        self._mass = {k: self._compute_mass(k) for k in range(1, d + 1)}
        self._ell1 = None
        if check_x_hat:
            re_phi = self.phi1(data.x_hat).real
            if not re_phi < 0:
                raise ValueError(
                    f"Re phi1(x_hat) = {re_phi} is not negative: x_hat={data.x_hat} "
                    "lies beyond the admissible endpoint window"
                )

    # -- densities and masses ------------------------------------------------

    def density(self, k: int, s: float) -> float:
        if k == 1:
            return density_mu1(self.data, s)
        return density_muk(self.data, k, s)

    def _fit_tail(self, k: int):
        """Least-squares (A, B) with rho_k(s) ~ A s^{-p1} + B s^{-p2}."""
        S = self.s_max
        sf = np.geomspace(S / 3, S, 8)
        y = density_muk_many(self.data, k, sf)
        M = np.vstack([sf ** (-self._p1), sf ** (-self._p2)]).T
        A, B = np.linalg.lstsq(M, y, rcond=None)[0]
        return float(A), float(B)

    def _scalar_density(self, k: int):
        return lambda s: float(self._density_on(k, np.array([s]))[0])

    def _compute_mass(self, k: int):
        d = self.data.d
        with warnings.catch_warnings():
            # quad reports roundoff saturation near 1e-13; its error
            # estimate is returned alongside the value
            warnings.simplefilter("ignore", IntegrationWarning)
            if k == 1:
                val, err = quad(self._scalar_density(1), 0.0, self.data.x_star,
                                limit=300, epsabs=_EPSABS, epsrel=_EPSREL)
                return (d + 1) * val, (d + 1) * err
            val, err = quad(self._scalar_density(k), 0.0, self.s_max,
                            limit=400, epsabs=_EPSABS, epsrel=_EPSREL,
                            points=[self.data.x_star, 10 * self.data.x_star])
        A, B = self._tail[k]
        S = self.s_max
        p1, p2 = self._p1, self._p2
        tail = A * S ** (1 - p1) / (p1 - 1) + B * S ** (1 - p2) / (p2 - 1)
        return (d + 1) * (val + tail), (d + 1) * (err + abs(tail) * S ** (-1 - 1.0 / d))

    def mass(self, k: int) -> float:
        return self._mass[k][0]

    def mass_error(self, k: int) -> float:
        return self._mass[k][1]

    # -- geometry helpers ------------------------------------------------------

    def _ray_location(self, k: int, z: complex):
        """(on_ray, s, min_distance): nearest point of Sigma_k's rays to z."""
        d = self.data.d
        th = reference_angle(d, k)
        hi = self.data.x_star if k == 1 else math.inf
        best = (False, 0.0, math.inf)
        for m in range(d + 1):
            e = cmath.exp(1j * (th + 2 * math.pi * m / (d + 1)))
            proj = (z * e.conjugate()).real
            s = min(max(proj, 0.0), hi)
            dist = abs(z - s * e)
            if dist < best[2]:
                best = (dist <= 1e-12 * max(abs(z), self.data.x_star), s, dist)
        return best

    def support_distance(self, z: complex) -> float:
        """Distance from z to the bounded star Sigma_1^*."""
        return self._ray_location(1, z)[2]

    # -- potentials ------------------------------------------------------------

    def potential(self, k: int, z: complex) -> float:
        """U^{mu_k}(z) = -int log|z - t| dmu_k(t); continuous everywhere."""
        d = self.data.d
        z = complex(z)
        on_ray, s0, dist = self._ray_location(k, z)
        if on_ray or dist < NEAR_SUPPORT_DIST * self.data.x_star:
            if not on_ray:
                warnings.warn(f"potential evaluated {dist} from Sigma_{k}",
                              NearSupportWarning, stacklevel=2)
            return self._potential_on_ray(k, abs(z))
        nodes, wts = self._grid[k]
        th = reference_angle(d, k)
        total = 0.0
        for m in range(d + 1):
            e = cmath.exp(1j * (th + 2 * math.pi * m / (d + 1)))
            total -= float(np.dot(wts, np.log(np.abs(z - nodes * e))))
        return total + self._potential_tail(k)

    def _potential_on_ray(self, k: int, x: float) -> float:
        """U^{mu_k} at x * exp(i theta_k), splitting off the singular own ray."""
        d = self.data.d
        th = reference_angle(d, k)
        z = x * cmath.exp(1j * th)
        hi = self.data.x_star if k == 1 else self.s_max
        dens = self._scalar_density(k)

        def f_own(s):
            return -dens(s) * math.log(abs(x - s))

        pts = sorted({min(max(x, 1e-12), hi * (1 - 1e-12))})
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            own, _ = quad(f_own, 0.0, hi, limit=400, epsabs=_EPSABS, epsrel=_EPSREL,
                          points=pts)
        nodes, wts = self._grid[k]
        cross = 0.0
        for m in range(1, d + 1):
            e = cmath.exp(1j * (th + 2 * math.pi * m / (d + 1)))
            cross -= float(np.dot(wts, np.log(np.abs(z - nodes * e))))
        # the x-dependent tail corrections cancel across the d+1 rays:
        # sum_m ln|x e^{i th} - s e^{i th} om^m| = (d+1) ln s + ln|1-(x/s)^{d+1}|
        return own + cross + self._potential_tail(k)

    def _potential_tail(self, k: int) -> float:
        """z-independent tail of the potential over all d+1 rays (k >= 2)."""
        if k == 1:
            return 0.0
        A, B = self._tail[k]
        return -(self.data.d + 1) * _log_tail(A, B, self._p1, self._p2, self.s_max)

    # -- Cauchy transforms -----------------------------------------------------

    def _kernel_mesh(self, k: int, z: complex) -> tuple[np.ndarray, np.ndarray]:
        """Graded Gauss-Legendre mesh on (0, hi) resolving all kernel peaks.

        Base panels are geometric from both endpoints; around the projection
        of z on each ray, panels are refined down to half the distance from
        z to that ray.  Cached density values are interwoven at call time.
        """
        d = self.data.d
        hi = self.data.x_star if k == 1 else self.s_max
        th = reference_angle(d, k)
        # floor: below ~1e-8 hi the branch ties at the origin amplify
        # roundoff in the density, and the omitted mass is O(rho(0) * floor)
        floor = hi * 2.0**-26
        edges = {0.0, floor, hi}
        edges.update(hi * 2.0 ** (-np.arange(1, 26, dtype=float)))
        edges.update(hi - (hi / 2) * 2.0 ** (-np.arange(1, 30, dtype=float)))
        for m in range(d + 1):
            e = cmath.exp(1j * (th + 2 * math.pi * m / (d + 1)))
            proj = (z * e.conjugate()).real
            if not 0 < proj < hi:
                continue
            width = max(abs(z - proj * e), 1e-9 * self.data.x_star)
            for j in range(28):
                h = width / 2 * 2.0**j
                if h > hi:
                    break
                for p in (proj - h, proj + h):
                    if floor < p < hi:
                        edges.add(p)
        edges = np.array(sorted(edges))
        xg, wg = np.polynomial.legendre.leggauss(16)
        a, b = edges[:-1], edges[1:]
        nodes = (0.5 * (b - a)[:, None] * xg[None, :] + 0.5 * (a + b)[:, None]).ravel()
        wts = (0.5 * (b - a)[:, None] * wg[None, :]).ravel()
        return nodes, wts

    def _density_on_raw(self, k: int, s: np.ndarray) -> np.ndarray:
        if k == 1:
            return density_mu1_many(self.data, np.minimum(s, self.data.x_star * (1 - 1e-12)))
        return density_muk_many(self.data, k, s)

    def _density_on(self, k: int, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = np.empty_like(s)
        low = s < self._s_lo
        if np.any(~low):
            out[~low] = self._density_on_raw(k, s[~low])
        if np.any(low):
            rho0, c = self._origin_fit[k]
            out[low] = rho0 + c * s[low] ** (1.0 / self.data.d)
        return out

    def cauchy(self, k: int, z: complex) -> complex:
        """F_k(z) = int dmu_k(t)/(z - t), z off Sigma_k.

        The kernel peaks with width dist(z, ray) near each ray, which a
        uniform grid cannot resolve, so the quadrature runs on a graded
        mesh refined around every ray projection of z.
        """
        d = self.data.d
        z = complex(z)
        on_ray, s0, dist = self._ray_location(k, z)
        if on_ray:
            raise ValueError(
                f"z={z} lies on Sigma_{k}; use cauchy_boundary for one-sided values")
        if dist < NEAR_SUPPORT_DIST * self.data.x_star:
            warnings.warn(f"Cauchy transform evaluated {dist} from Sigma_{k}",
                          NearSupportWarning, stacklevel=2)
        th = reference_angle(d, k)
        nodes, wts = self._kernel_mesh(k, z)
        rho = self._density_on(k, nodes)
        total = 0j
        for m in range(d + 1):
            e = cmath.exp(1j * (th + 2 * math.pi * m / (d + 1)))
            total += complex(np.sum(wts * rho / (z - nodes * e)))
        # truncation tails cancel across the d+1 rays up to O(z^d S^{-d-2-1/d})
        return total

    def cauchy_boundary(self, k: int, x: float):
        """One-sided boundary values (F_minus, F_plus) at x on the reference ray.

        F_{k,-+} = e^{-i theta}(PV -+(-) i pi rho_k(x)) + regular rays, by the
        Plemelj decomposition; the PV integral is computed by singularity
        subtraction.
        """
        d = self.data.d
        th = reference_angle(d, k)
        hi = self.data.x_star if k == 1 else self.s_max
        if not 0 < x < hi:
            raise ValueError(f"x must be inside (0, {hi})")
        dens = self._scalar_density(k)
        rho_x = dens(x)

        def f_sub(s):
            return (dens(s) - rho_x) / (x - s)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            pv, _ = quad(f_sub, 0.0, hi, limit=400, epsabs=_EPSABS, epsrel=_EPSREL,
                         points=[x])
        pv += rho_x * math.log(x / (hi - x))
        # truncation tails of the own and rotated rays cancel against each
        # other up to O(S^{-(d+1)}) because sum_m omega^{-m j} = 0 for j < d+1
        z = x * cmath.exp(1j * th)
        nodes, wts = self._kernel_mesh(k, z)
        rho = self._density_on(k, nodes)
        rest = 0j
        for m in range(1, d + 1):
            e = cmath.exp(1j * (th + 2 * math.pi * m / (d + 1)))
            rest += complex(np.sum(wts * rho / (z - nodes * e)))
        phase = cmath.exp(-1j * th)
        f_minus = phase * (pv + 1j * math.pi * rho_x) + rest
        f_plus = phase * (pv - 1j * math.pi * rho_x) + rest
        return f_minus, f_plus

    def potential_and_cauchy(self, z: complex) -> PotentialEval:
        d = self.data.d
        U = np.array([self.potential(k, z) for k in range(1, d + 1)])
        F = np.array([self.cauchy(k, z) for k in range(1, d + 1)])
        return PotentialEval(z=complex(z), U=U, F=F)

    # -- variational structure ---------------------------------------------------

    def external_field(self, x: float) -> float:
        """(1/t0) * (d/((d+1) t_top^{1/d}) |x|^{(d+1)/d} - t_top/(d+1) x^{d+1}) on the real ray."""
        d, t0, tt = self.data.d, self.data.t0, self.data.t_top
        return (d / ((d + 1) * tt ** (1.0 / d)) * abs(x) ** ((d + 1.0) / d)
                - tt / (d + 1) * x ** (d + 1)) / t0

    def _lhs_mu1(self, x: float) -> float:
        return -2 * self.potential(1, x) + self.potential(2, x) - self.external_field(x)

    @property
    def ell1(self) -> float:
        """Variational constant, defined by evaluation at x_star/2."""
        if self._ell1 is None:
            self._ell1 = self._lhs_mu1(0.5 * self.data.x_star)
        return self._ell1

    def variational_residual(self, n_grid: int = 16) -> VariationalReport:
        """Residuals of the equality conditions and sign of the inequality."""
        d = self.data.d
        xs = self.data.x_star
        grid1 = np.linspace(0.05 * xs, 0.95 * xs, n_grid)
        eq1 = max(abs(self._lhs_mu1(x) - self.ell1) for x in grid1)
        grid_out = np.linspace(xs * 1.001, self.data.x_hat, 8)
        ineq = max(self._lhs_mu1(x) - self.ell1 for x in grid_out)
        eqk = {}
        for k in range(2, d + 1):
            th = reference_angle(d, k)
            res = 0.0
            for s in np.geomspace(0.1 * xs, 5 * xs, n_grid // 2):
                z = s * cmath.exp(1j * th)
                lhs = 2 * self.potential(k, z) - self.potential(k - 1, z)
                if k + 1 <= d:
                    lhs -= self.potential(k + 1, z)
                res = max(res, abs(lhs))
            eqk[k] = res
        return VariationalReport(ell1=self.ell1, eq1_max=eq1, ineq_max=ineq, eqk_max=eqk)

    def balayage_residual(self, k: int, x: float) -> float:
        """Residual of the boundary-value identity for F_k on its support ray.

        k = 1:      F_{1,+} + F_{1,-} - F_2 - (1/t0)(t_top^{-1/d} x^{1/d} - t_top x^d)
        1 < k < d:  F_{k,+} + F_{k,-} - F_{k-1} - F_{k+1}
        k = d:      F_{d,+} + F_{d,-} - F_{d-1}
        evaluated on the reference ray of Sigma_k.
        """
        d, t0, tt = self.data.d, self.data.t0, self.data.t_top
        th = reference_angle(d, k)
        z = x * cmath.exp(1j * th)
        fm, fp = self.cauchy_boundary(k, x)
        lhs = fm + fp
        if k == 1:
            rhs = self.cauchy(2, z) + (x ** (1.0 / d) / tt ** (1.0 / d) - tt * x**d) / t0
        elif k < d:
            rhs = self.cauchy(k - 1, z) + self.cauchy(k + 1, z)
        else:
            rhs = self.cauchy(d - 1, z)
        return abs(lhs - rhs)

    # -- g- and phi-functions ------------------------------------------------------

    def g1(self, z: complex) -> complex:
        """g_1(z) = int log(z - t) dmu_1(t), cut along R^- and the star.

        Real part is exactly the (negated) potential quadrature; the
        imaginary part accumulates arg(z - t) continuously along each ray
        starting from the principal arg(z), which realizes the branch cut
        R^- united with [0, t].
        """
        d = self.data.d
        z = complex(z)
        if self.support_distance(z) < 1e-12:
            raise ValueError("g1 undefined on the star")
        nodes, wts = self._grid[1]
        th0 = cmath.phase(z)
        total = 0j
        for m in range(d + 1):
            e = cmath.exp(2j * math.pi * m / (d + 1))
            pts = z - nodes * e
            ang = _unwrap_from(np.angle(pts), th0)
            total += np.dot(wts, np.log(np.abs(pts)) + 1j * ang)
        return complex(total)

    def phi1(self, z: complex, n_quad: int = 120) -> complex:
        """phi_1(z) = (1/2 t0) int_{x* omega^l}^z (xi_1 - xi_2), path inside the sector.

        Rotation symmetry reduces to the central sector; the path is the
        straight segment with the parabolic substitution s = x* + (z-x*) v^2,
        which flattens the square-root vanishing of xi_1 - xi_2 at x*.
        """
        d = self.data.d
        z = complex(z)
        # rotate into the sector |arg| <= pi/(d+1)
        sec = round(cmath.phase(z) / (2 * math.pi / (d + 1)))
        z0 = z * cmath.exp(-2j * math.pi * sec / (d + 1))
        xs = self.data.x_star
        if abs(z0.imag) < 1e-14 * xs and 0 <= z0.real <= xs:
            raise ValueError("phi1 undefined on the star segment")
        v, wv = gauss_legendre(n_quad, 0.0, 1.0)
        s = xs + (z0 - xs) * v**2
        diff = np.empty(len(s), dtype=complex)
        for i, si in enumerate(s):
            bs = branches(self.data, si)
            diff[i] = bs.xi[0] - bs.xi[1]
        integral = np.dot(wv * 2 * v, diff) * (z0 - xs)
        return complex(integral / (2 * self.data.t0))

    # -- export -------------------------------------------------------------------

    def density_table(self, k: int, n: int = 200) -> np.ndarray:
        """(ray_coordinate, density) rows for CSV export."""
        if k == 1:
            s = np.linspace(self.data.x_star / n, self.data.x_star * (1 - 1e-9), n)
        else:
            s = np.geomspace(self.data.x_star * 1e-3, 10 * self.data.x_star, n)
        rho = np.array([self.density(k, si) for si in s])
        return np.column_stack([s, rho])


def _log_tail(A: float, B: float, p1: float, p2: float, S: float) -> float:
    """int_S^inf (A s^{-p1} + B s^{-p2}) ln s ds."""
    t1 = A * S ** (1 - p1) * (math.log(S) / (p1 - 1) + 1.0 / (p1 - 1) ** 2)
    t2 = B * S ** (1 - p2) * (math.log(S) / (p2 - 1) + 1.0 / (p2 - 1) ** 2)
    return t1 + t2


def _tanh_sinh(n: int, tmax: float = 4.0):
    """Double-exponential nodes/weights for int_0^1, endpoints excluded."""
    t = np.linspace(-tmax, tmax, n)
    h = t[1] - t[0]
    u = 0.5 * (np.tanh(0.5 * math.pi * np.sinh(t)) + 1.0)
    du = 0.5 * math.pi * np.cosh(t) / np.cosh(0.5 * math.pi * np.sinh(t)) ** 2
    # nodes closer than 1e-12 to an endpoint carry ~1e-12 of weight and sit
    # where branch labels degenerate; drop them
    keep = (u > 1e-12) & (u < 1.0 - 1e-16)
    return u[keep], (0.5 * du * h)[keep]


def _unwrap_from(angles: np.ndarray, start: float) -> np.ndarray:
    """Unwrap a phase sequence so its first element is within pi of `start`."""
    seq = np.unwrap(np.concatenate([[start], angles]))
    return seq[1:]
