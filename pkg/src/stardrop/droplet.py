"""The Laplacian-growth droplet: boundary, moments, Schwarz-function checks.

The droplet boundary is the image of the unit circle under the conformal
map psi, a simple closed analytic curve in the subcritical regime.  Its
exterior harmonic moments are trigonometric-polynomial integrals, so the
uniform-grid trapezoid rule evaluates them to roundoff.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .model import SubcriticalData
from .surface import branches, psi, psi_prime


@dataclass(frozen=True)
class DropletBoundary:
    """Samples of psi(e^{i theta}) on a uniform grid of [0, 2 pi)."""

    data: SubcriticalData
    theta: np.ndarray
    points: np.ndarray
    closed: bool = True

    def table(self) -> np.ndarray:
        """(theta, re, im) rows for CSV export."""
        return np.column_stack([self.theta, self.points.real, self.points.imag])


def boundary(data: SubcriticalData, n_theta: int = 512) -> DropletBoundary:
    """Sample the boundary and verify the star is strictly inside.

    Raises if the cusp indicator min |psi'(e^{i theta})| vanishes (critical
    or supercritical data) or if any star endpoint fails the winding test.
    """
    theta = np.linspace(0.0, 2 * math.pi, n_theta, endpoint=False)
    w = np.exp(1j * theta)
    pts = psi(data, w)
    dmin = np.min(np.abs(psi_prime(data, w)))
    if dmin < 1e-9 * data.r:
        raise ValueError(
            "boundary map degenerates (|psi'| ~ 0 on |w|=1): not subcritical")
    b = DropletBoundary(data=data, theta=theta, points=pts)
    for ell in range(data.d + 1):
        e = cmath.exp(2j * math.pi * ell / (data.d + 1))
        if winding_number(b, data.x_star * e) != 1:
            raise ValueError(f"star endpoint {data.x_star * e} not enclosed by the boundary")
    return b


def winding_number(b: DropletBoundary, z: complex) -> int:
    """Winding number of the sampled boundary polygon around z."""
    rel = b.points - z
    ang = np.angle(rel)
    dth = np.diff(np.concatenate([ang, ang[:1]]))
    dth = (dth + math.pi) % (2 * math.pi) - math.pi
    return int(round(dth.sum() / (2 * math.pi)))


def contains(b: DropletBoundary, z: complex) -> bool:
    return winding_number(b, z) != 0


def harmonic_moment(b: DropletBoundary, k: int) -> complex:
    """(1/2 pi i) * contour integral of conj(z) z^{-k} dz over the boundary.

    The integrand is a trigonometric polynomial of bounded degree in
    e^{i theta}, so the trapezoid value is exact to roundoff once the grid
    has more points than twice the degree.  Moment 0 is the area/pi = t0;
    moment d+1 equals t_top; all others vanish.
    """
    if k < 0:
        raise ValueError("moment index must be >= 0")
    data = b.data
    w = np.exp(1j * b.theta)
    z = b.points
    conj_z = psi(data, 1.0 / w)        # equals conj(psi(w)) on |w| = 1
    dz = psi_prime(data, w) * 1j * w   # dz/dtheta
    vals = conj_z * z ** (-float(k)) * dz
    return complex(np.mean(vals) / 1j)


def schwarz_residual(data: SubcriticalData, theta: float) -> float:
    """|xi_1(psi(e^{i theta})) - conj(psi(e^{i theta}))|.

    Exercises the largest-modulus branch selection: on the boundary the
    first branch of the surface recovers w = e^{i theta} itself.
    """
    w = cmath.exp(1j * theta)
    z = psi(data, w)
    xi1 = branches(data, z).xi[0]
    return abs(xi1 - z.conjugate())


def exterior_cauchy_residual(measures, z: complex, n_theta: int = 1024) -> float:
    """|F_1(z) - (1/(2 pi i t0)) * contour integral of conj(zeta)/(z - zeta) d zeta|.

    `measures` is a MeasureFamily; z must lie outside the droplet.
    """
    data = measures.data
    b = boundary(data, n_theta)
    if contains(b, z):
        raise ValueError(f"z={z} lies inside the droplet")
    w = np.exp(1j * b.theta)
    conj_z = psi(data, 1.0 / w)
    dz = psi_prime(data, w) * 1j * w
    integral = complex(np.mean(conj_z / (z - b.points) * dz) / 1j)
    return abs(measures.cauchy(1, z) - integral / data.t0)


def polygon_is_simple(b: DropletBoundary) -> bool:
    """Segment-pair intersection test on the sampled polygon (O(N^2))."""
    p = b.points
    n = len(p)
    a = p
    c = np.roll(p, -1)
    for i in range(n):
        # vectorized orientation tests of segment i against all non-adjacent j > i
        j = np.arange(i + 2, n if i > 0 else n - 1)
        if len(j) == 0:
            continue
        d1 = _cross(c[i] - a[i], a[j] - a[i])
        d2 = _cross(c[i] - a[i], c[j] - a[i])
        d3 = _cross(c[j] - a[j], a[i] - a[j])
        d4 = _cross(c[j] - a[j], c[i] - a[j])
        if np.any((d1 * d2 < 0) & (d3 * d4 < 0)):
            return False
    return True


def _cross(u, v):
    return u.real * np.asarray(v).imag - u.imag * np.asarray(v).real
