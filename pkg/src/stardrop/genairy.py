"""Generalized Airy functions: contour-integral solutions of p^(d) = (-1)^d z p.

p_ell(z) = (1/2 pi i) * int_{Gamma_ell} exp(-s z + s^(d+1)/(d+1)) ds, where
Gamma_ell runs from the direction exp(i(2 ell - 1) pi/(d+1)) * inf to
exp(i(2 ell + 1) pi/(d+1)) * inf.  For d = 2 and ell = 0 this is the
classical Airy function Ai.

Numerically the contour is taken through the saddle s^d = z nearest the
sector bisector, with straight legs at bisector +- 5 pi/(4(d+1)); on these
legs the cubic-type term dominates and the integrand decays
superexponentially, while passing through the saddle keeps the integrand
maximum at the scale of the result (no catastrophic cancellation in the
recessive directions).  Derivatives differentiate under the integral via
the (-s)^j factor.  Results are returned in split (mantissa, exponent)
form so the recessive tails never underflow.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpc, mpf

from .errors import QuadratureError, SectorBoundaryError
from .quadrature import mp_gauss_legendre
from .splitnum import SplitValue

#: default evaluation radius limit for p_eval
R_MAX_DEFAULT = 50.0
#: radius limit of the Taylor-series oracle
SERIES_RADIUS = 10.0
#: relative truncation target of the contour tails
TAIL_RELATIVE = 1e-22


@dataclass(frozen=True)
class AiryStack:
    """p_ell and derivatives at one point, j = 0..max_deriv, split form."""

    d: int
    ell: int
    z: complex
    values: tuple[SplitValue, ...]

    def value(self, j: int = 0) -> SplitValue:
        return self.values[j]

    def as_complex(self) -> np.ndarray:
        return np.array([v.to_complex() for v in self.values])

    def ode_residual(self) -> float:
        """|p^(d) - (-1)^d z p| scaled by the largest stack magnitude.

        Requires max_deriv = d.
        """
        if len(self.values) < self.d + 1:
            raise ValueError("ode_residual needs derivatives up to order d")
        lhs = self.values[self.d]
        rhs = SplitValue.from_complex((-1) ** self.d * self.z) * self.values[0]
        scale = max(abs(v) for v in self.values)
        return abs((lhs - rhs).to_complex()) / scale if scale > 0 else 0.0


def _contour_plan(d: int, z: complex, bisector: float):
    """Choose the saddle chain and leg angles for the Gamma contour at z.

    Returns (chain_points, beta_in, beta_out).  All candidates are
    homotopic (the tails stay inside the two convergence valleys and the
    integrand is entire), so the value does not depend on the choice;
    conditioning does.  Chains are contiguous windows of saddles
    (roots of s^d = z) around the one nearest the bisector, leg angles are
    either the valley center pi/(d+1) or 25% beyond it, and the
    combination with the lowest sampled maximum of Re phi wins: that keeps
    the integrand peak at the scale of the result and the quadrature
    cancellation-free.
    """
    betas = (math.pi / (d + 1), 5 * math.pi / (4 * (d + 1)))
    if z == 0:
        return [0j], betas[0], betas[0]
    base = abs(z) ** (1.0 / d)
    th = cmath.phase(z)
    step = 2 * math.pi / d
    central = (th + 2 * math.pi * round((d * bisector - th) / (2 * math.pi))) / d

    def phi_re(s):
        return np.real(-s * z + s ** (d + 1) / (d + 1))

    # ridges live where |s|^d ~ |z|, i.e. t = O(|z|^{1/d}); probe well past that
    t_probe = np.geomspace(1e-3, 4.0 * (base + 1.0), 32)

    def score(chain_angles, b_in, b_out):
        pts = [base * cmath.exp(1j * a) for a in chain_angles]
        m = phi_re(np.array(pts)).max()
        for anchor, sign, b in ((pts[0], -1, b_in), (pts[-1], +1, b_out)):
            s = anchor + t_probe * cmath.exp(1j * (bisector + sign * b))
            m = max(m, phi_re(s).max())
        for s_from, s_to in zip(pts[:-1], pts[1:]):
            s = s_from + np.linspace(0, 1, 16) * (s_to - s_from)
            m = max(m, phi_re(s).max())
        return m

    # contiguous windows of saddles around the central one; for d >= 5 the
    # leg span can exceed the saddle spacing 2*pi/d, so +-2 extensions help
    reach = 1 if d <= 4 else 2
    chains = []
    for lo in range(0, reach + 1):
        for hi in range(0, reach + 1):
            if lo + hi >= d:
                continue
            chains.append([central + m * step for m in range(-lo, hi + 1)])
    best, best_cost = None, math.inf
    for ch in chains:
        for b_in in betas:
            for b_out in betas:
                # extra saddles cost extra (oscillatory) segments
                cost = score(ch, b_in, b_out) + 2.0 * (len(ch) - 1)
                if cost < best_cost:
                    best, best_cost = (ch, b_in, b_out), cost
    chain_angles, b_in, b_out = best
    return [base * cmath.exp(1j * a) for a in chain_angles], b_in, b_out


#: phase budget per quadrature panel (radians); 48-point GL resolves this easily
_PANEL_PHASE = 15.0


def _leg_breaks(d: int, z: complex, anchor: complex, alpha: float,
                target: float) -> list[float]:
    """Adaptive panel breakpoints along the ray anchor + t e^{i alpha}.

    Panel widths track the local oscillation rate |phi'| <= |z| + |s|^d so
    each panel carries a bounded phase; the leg extends until Re phi has
    dropped `target` below its running maximum along the leg.
    """
    e = cmath.exp(1j * alpha)

    def re_phi(t: float) -> float:
        s = anchor + t * e
        return (-s * z + s ** (d + 1) / (d + 1)).real

    breaks = [0.0]
    top = re_phi(0.0)
    t = 0.0
    for _ in range(2000):
        rate = max(abs(z) + (abs(anchor) + t) ** d, 1e-12)
        t = t + min(1.0, _PANEL_PHASE / rate)
        breaks.append(t)
        now = re_phi(t)
        top = max(top, now)
        if now < top - target:
            return breaks
    raise QuadratureError("contour truncation did not converge")


def p_eval(d: int, ell: int, z: complex, max_deriv: int = 0,
           r_max: float = R_MAX_DEFAULT, order: int = 48) -> AiryStack:
    """Evaluate p_ell^(j)(z) for j = 0..max_deriv by saddle-chain quadrature.

    The contour for Gamma_ell comes in from one convergence valley,
    threads through the saddles selected by _contour_plan, and leaves
    through the other valley.
    """
    if not 0 <= max_deriv <= d:
        raise ValueError(f"max_deriv must be in 0..{d}")
    values = stack_eval(d, ell, z, max_deriv, r_max=r_max, order=order)
    return AiryStack(d=d, ell=ell % (d + 1), z=complex(z), values=tuple(values))


def stack_eval(d: int, ell: int, z: complex, jmax: int,
               r_max: float = R_MAX_DEFAULT, order: int = 48) -> list[SplitValue]:
    """p_ell^(j)(z) for j = 0..jmax, jmax unrestricted (internal workhorse)."""
    if d < 2:
        raise ValueError("d must be >= 2")
    max_deriv = jmax
    z = complex(z)
    if abs(z) > r_max:
        raise ValueError(f"|z| = {abs(z)} exceeds r_max = {r_max}")
    ell = ell % (d + 1)

    bisector = 2 * math.pi * ell / (d + 1)
    chain, beta_in, beta_out = _contour_plan(d, z, bisector)
    xg, wg = np.polynomial.legendre.leggauss(order)

    # pieces: (start, direction, t_nodes, t_weights, orientation)
    target = -math.log(TAIL_RELATIVE) + (d + 1) * math.log1p(abs(chain[0]) + abs(z))
    pieces = []
    for anchor, sign, beta in ((chain[0], -1, beta_in), (chain[-1], +1, beta_out)):
        alpha = bisector + sign * beta
        breaks = _leg_breaks(d, z, anchor, alpha, target)
        e = cmath.exp(1j * alpha)
        ts = [0.5 * (b - a) * xg + 0.5 * (a + b) for a, b in zip(breaks[:-1], breaks[1:])]
        ws = [0.5 * (b - a) * wg for a, b in zip(breaks[:-1], breaks[1:])]
        pieces.append((anchor, e, np.concatenate(ts), np.concatenate(ws), sign))
    for s_from, s_to in zip(chain[:-1], chain[1:]):
        length = abs(s_to - s_from)
        if length == 0:
            continue
        e = (s_to - s_from) / length
        # |phi'| <= |z| + max|s|^d bounds the oscillation rate on the chord
        rate = abs(z) + max(abs(s_from), abs(s_to)) ** d
        nseg = max(3, int(math.ceil(rate * length / 12.0)))
        ts = [length * (0.5 * (b - a) * xg + 0.5 * (a + b))
              for a, b in ((i / nseg, (i + 1) / nseg) for i in range(nseg))]
        ws = [length * 0.5 * (b - a) * wg
              for a, b in ((i / nseg, (i + 1) / nseg) for i in range(nseg))]
        pieces.append((s_from, e, np.concatenate(ts), np.concatenate(ws), +1))

    def phi(s):
        return -s * z + s ** (d + 1) / (d + 1)

    sampled = [(sgn, e, anchor + t * e, phi(anchor + t * e), w)
               for anchor, e, t, w, sgn in pieces]
    m0 = max(max(np.max(np.real(ph)) for _, _, _, ph, _ in sampled),
             max(np.real(phi(s)) for s in chain))
    sums = np.zeros(max_deriv + 1, dtype=complex)
    for sgn, e, s, ph, w in sampled:
        base = np.exp(ph - m0) * w * e * sgn
        for j in range(max_deriv + 1):
            sums[j] += np.sum(base * (-s) ** j)

    values = []
    for j in range(max_deriv + 1):
        v = sums[j] / (2j * math.pi)
        values.append(SplitValue.from_log(m0, v) if v != 0 else SplitValue.zero())
    return values


# ---------------------------------------------------------------------------
# Taylor-series oracle (mpmath)
# ---------------------------------------------------------------------------

def derivatives_at_zero(d: int, jmax: int, dps: int = 60):
    """p_0^(j)(0) for j = 0..jmax, in closed form via the Gamma function.

    Along the two rays of Gamma_0 the integrand reduces to a real
    Gamma-type integral, giving

      p_0^(j)(0) = (-1)^j/pi * sin((j+1) pi/(d+1))
                   * (d+1)^((j+1)/(d+1) - 1) * Gamma((j+1)/(d+1)).
    """
    old = mp.dps
    try:
        mp.dps = dps
        out = []
        for j in range(jmax + 1):
            q = mpf(j + 1) / (d + 1)
            val = (-1) ** j / mp.pi * mp.sin((j + 1) * mp.pi / (d + 1)) \
                * mpf(d + 1) ** (q - 1) * mp.gamma(q)
            out.append(val)
    finally:
        mp.dps = old
    return out


def p_series(d: int, ell: int, z: complex, max_deriv: int = 0,
             dps: int = 50) -> AiryStack:
    """Taylor evaluation of p_ell^(j)(z) on |z| <= 10 (independent oracle).

    Coefficients follow the recursion a_{m+d} = (-1)^d a_{m-1} m!/(m+d)!
    with a_d = 0, seeded by the closed-form derivatives at 0.  The sum
    cancels catastrophically in the recessive directions, so it is carried
    out in mpmath at `dps` digits; this is what makes it an honest oracle
    for the quadrature path down to 1e-10 relative.
    """
    z = complex(z)
    if abs(z) > SERIES_RADIUS:
        raise ValueError(f"series oracle limited to |z| <= {SERIES_RADIUS}, got {abs(z)}")
    if not 0 <= max_deriv <= d:
        raise ValueError(f"max_deriv must be in 0..{d}")
    ell = ell % (d + 1)
    old = mp.dps
    try:
        mp.dps = dps
        omega = mp.e ** (2j * mp.pi / (d + 1))
        u = omega**ell * mpc(z)
        seeds = derivatives_at_zero(d, d - 1, dps=dps)
        # a_m = p0^(m)(0)/m!
        coeffs = [seeds[j] / mp.factorial(j) for j in range(d)] + [mpf(0)]
        r = mpf(max(abs(z), 1e-30))
        cutoff = mpf(10) ** (-(dps + 8))
        peak = max(abs(c) for c in coeffs[:d])
        k, quiet = d + 1, 0
        while quiet < 2 * (d + 1) and k < 100000:
            m = k - d
            c = (-1) ** d * coeffs[m - 1] * mp.factorial(m) / mp.factorial(k)
            coeffs.append(c)
            t = abs(c) * r**k
            peak = max(peak, t)
            quiet = quiet + 1 if t < cutoff * peak else 0
            k += 1
        nterms = len(coeffs)
        vals_p0 = []
        for j in range(max_deriv + 1):
            acc = mpc(0)
            up = mpc(1)
            for m in range(j, nterms):
                term = coeffs[m] * mp.factorial(m) / mp.factorial(m - j) * up
                acc += term
                up *= u
            vals_p0.append(acc)
        values = []
        for j in range(max_deriv + 1):
            v = omega ** (ell * (j + 1)) * vals_p0[j]
            values.append(SplitValue.from_complex(complex(v)))
    finally:
        mp.dps = old
    return AiryStack(d=d, ell=ell, z=z, values=tuple(values))


# ---------------------------------------------------------------------------
# asymptotic formula check
# ---------------------------------------------------------------------------

def asymptotic_check(d: int, ell: int, z: complex, r_max: float = R_MAX_DEFAULT) -> float:
    """Relative deviation of p_ell(z) from its leading asymptotic form.

    Valid as z -> infinity with -2 ell pi/(d+1) - pi < arg z < -2 ell pi/(d+1) + pi;
    requires |z| >= 5.
    """
    z = complex(z)
    if abs(z) < 5:
        raise ValueError("asymptotic check requires |z| >= 5")
    ell_w = ((ell + (d + 1) // 2) % (d + 1)) - (d + 1) // 2  # wrap near 0
    center = -2 * math.pi * ell_w / (d + 1)
    th = cmath.phase(z)
    while th <= center - math.pi:
        th += 2 * math.pi
    while th > center + math.pi:
        th -= 2 * math.pi
    if not (center - math.pi < th < center + math.pi):
        raise SectorBoundaryError("z outside the validity sector of the asymptotic form")
    logz = math.log(abs(z)) + 1j * th
    omega_d = cmath.exp(2j * math.pi / d)
    expo = -(d / (d + 1)) * omega_d**ell_w * cmath.exp((d + 1) / d * logz)
    # asymptotic value in split form
    asymp = SplitValue.from_log(
        expo.real,
        cmath.exp(1j * expo.imag)
        * cmath.exp(1j * math.pi * ell_w / d)
        * cmath.exp(-(d - 1) / (2 * d) * logz)
        / math.sqrt(2 * math.pi * d),
    )
    got = p_eval(d, ell, z, 0, r_max=r_max).value(0)
    diff = got - asymp
    return math.exp(diff.log_abs() - asymp.log_abs())


# ---------------------------------------------------------------------------
# mpmath twin of p_eval, for moment assembly at working precision
# ---------------------------------------------------------------------------

def p0_stack_mp(d: int, z, jmax: int, dps: int):
    """p_0^(j)(z) j = 0..jmax as mpmath complex numbers at `dps` digits.

    Same saddle contour as p_eval, fixed-order GL panels at working
    precision.  Used by the moment assembly, where double precision in the
    weights would bottleneck the achievable accuracy of the linear system.
    """
    old = mp.dps
    try:
        mp.dps = dps
        z = mpc(z)
        s0 = z ** (mpf(1) / d) if z != 0 else mpc(0)
        beta = mp.pi / (d + 1)

        def phi(s):
            return -s * z + s ** (d + 1) / (d + 1)

        nodes, weights = mp_gauss_legendre(48, dps)
        target = float(mpf(dps + 8) * mp.log(10))
        vals = [mpc(0)] * (jmax + 1)
        m0 = mp.re(phi(s0))
        zf = complex(z)
        s0f = complex(s0)
        for sign in (1, -1):
            alpha = float(sign * beta)
            breaks = _leg_breaks(d, zf, s0f, alpha, target)
            e = mp.e ** (1j * sign * beta)
            for a, b in zip(breaks[:-1], breaks[1:]):
                half = (mpf(b) - mpf(a)) / 2
                mid = (mpf(b) + mpf(a)) / 2
                for xg, wq in zip(nodes, weights):
                    s = s0 + (mid + half * xg) * e
                    f = mp.e ** (phi(s) - m0) * half * wq * e * sign
                    for j in range(jmax + 1):
                        vals[j] += f * (-s) ** j
        c = mp.e**m0 / (2j * mp.pi)
        return [v * c for v in vals]
    finally:
        mp.dps = old
