"""Szego-type prefactor of the strong asymptotics via a meromorphic differential.

On the genus-zero surface (global coordinate w) the differential

    eta(w) dw = [ (d+1)/(2w) - (d+1)/2 * w^d / (w^{d+1} - rho^{d+1}) ] dw

is the unique one with simple poles of residue -1/2 at the branch points
w = omega^l rho, residue (d+1)/2 at the point over infinity on the lower
sheets (w = 0), and no other poles; partial fractions force this form,
and eta_residue_check verifies it numerically before it is trusted.

Integrating from infinity on the first sheet gives

    M(z) = exp(int eta) = (1 - (rho / w_1(z))^{d+1})^{-1/2},

with the principal square root: |w_1| > rho off the star, so the argument
stays in the right half plane and the branch continued from 1 at infinity
is the principal one.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ResidueMismatchError
from .model import SubcriticalData
from .quadrature import gauss_legendre
from .surface import branches


@dataclass(frozen=True)
class ResidueReport:
    branch_point_residues: list[complex]   # at w = omega^l rho, target -1/2
    zero_residue: complex                  # at w = 0, target (d+1)/2
    large_circle: complex                  # contour at |w| >> 1, target 0
    residue_sum: complex                   # target 0

    @property
    def ok(self) -> bool:
        tol = 1e-10
        return (all(abs(r + 0.5) <= tol for r in self.branch_point_residues)
                and abs(self.zero_residue - (len(self.branch_point_residues)) / 2.0) <= tol
                and abs(self.large_circle) <= tol
                and abs(self.residue_sum) <= tol)


class M11Evaluator:
    """Evaluates the (1,1) global-parametrix entry off the bounded star."""

    def __init__(self, data: SubcriticalData, min_distance: float = 1e-6,
                 validate: bool = True):
        self.data = data
        self.w_star = data.rho
        self.min_distance = min_distance
        if validate:
            report = self.eta_residue_check()
            if not report.ok:
                raise ResidueMismatchError(f"eta residue check failed: {report}")

    # -- the differential -----------------------------------------------------

    def eta_w(self, w):
        d = self.data.d
        w = np.asarray(w, dtype=complex) if np.ndim(w) else complex(w)
        return (d + 1) / (2.0 * w) - (d + 1) / 2.0 * w**d / (w ** (d + 1) - self.w_star ** (d + 1))

    def eta_residue_check(self, radius_factor: float = 0.05,
                          n_samples: int = 4096) -> ResidueReport:
        """Trapezoid contour integrals of eta around its poles."""
        d = self.data.d
        rho = self.w_star

        def residue_at(center: complex, radius: float) -> complex:
            th = np.linspace(0.0, 2 * math.pi, n_samples, endpoint=False)
            w = center + radius * np.exp(1j * th)
            vals = self.eta_w(w) * 1j * radius * np.exp(1j * th)
            return complex(np.mean(vals) / 1j)

        bp = [residue_at(rho * cmath.exp(2j * math.pi * l / (d + 1)), radius_factor * rho)
              for l in range(d + 1)]
        at_zero = residue_at(0.0, 0.5 * rho)   # branch poles lie outside |w| = rho/2
        big = residue_at(0.0, 50.0 * max(1.0, rho))
        return ResidueReport(branch_point_residues=bp, zero_residue=at_zero,
                             large_circle=big, residue_sum=sum(bp) + at_zero)

    # -- evaluation -------------------------------------------------------------

    def _w1(self, z: complex) -> complex:
        dist = self._star_distance(z)
        if dist < self.min_distance:
            raise ValueError(f"z={z} is within {dist} of the star; M11 not evaluated")
        return branches(self.data, z).w[0]

    def _star_distance(self, z: complex) -> float:
        d = self.data.d
        best = math.inf
        for l in range(d + 1):
            e = cmath.exp(2j * math.pi * l / (d + 1))
            s = min(max((z * e.conjugate()).real, 0.0), self.data.x_star)
            best = min(best, abs(z - s * e))
        return best

    def m11(self, z: complex) -> complex:
        """Closed-form value (1 - (rho/w_1(z))^{d+1})^{-1/2}, principal branch."""
        w1 = self._w1(z)
        q = (self.w_star / w1) ** (self.data.d + 1)
        return (1.0 - q) ** (-0.5)

    def m11_path(self, z: complex, n_quad: int = 400) -> complex:
        """exp of the numerically path-integrated differential (cross-check).

        Path: series tail from infinity to W on the positive axis, arc at
        radius W to arg w_1(z), then radial segment to w_1(z).  W is chosen
        a factor 10 outside both rho and |w_1(z)|, so the path never meets
        the pole circle |w| = rho.
        """
        w1 = self._w1(z)
        W = 10.0 * max(self.w_star, abs(w1))
        q = (self.w_star / W) ** (self.data.d + 1)
        tail = 0.5 * sum(q**m / m for m in range(1, 60))
        phi = cmath.phase(w1)
        th, wth = gauss_legendre(n_quad, 0.0, phi)
        s_arc = W * np.exp(1j * th)
        arc = complex(np.sum(wth * self.eta_w(s_arc) * 1j * s_arc))
        t, wt = gauss_legendre(n_quad, 0.0, 1.0)
        start = W * cmath.exp(1j * phi)
        seg = start + t * (w1 - start)
        rad = complex(np.sum(wt * self.eta_w(seg)) * (w1 - start))
        return cmath.exp(tail + arc + rad)
