"""Numerical acceptance suite: every check the package promises, in one place.

Each check returns a CheckResult with a pass flag and a human-readable
detail string; `run_all` executes the standard battery.  The CLI `verify`
subcommand and the pytest acceptance module both call into here, so the
command line and the test suite cannot drift apart.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.special import airy

from . import curve as curve_mod
from . import droplet as droplet_mod
from . import genairy, mop, parametrix
from .equilibrium import MeasureFamily, density_mu1
from .model import ModelParams, SubcriticalData, critical_time
from .splitnum import SplitValue


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float = 0.0

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.name}: {self.detail} ({self.elapsed:.2f}s)"


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# -- 1 ------------------------------------------------------------------------

def check_critical_time() -> CheckResult:
    def run():
        got = critical_time(3, 2.0)
        rel = abs(got - 1.0 / 9.0) * 9.0
        return rel <= 1e-14, f"critical_time(3,2)={got!r}, rel err {rel:.2e}"
    (ok, detail), dt = _timed(run)
    return CheckResult("critical time", ok, detail, dt)


# -- 2 ------------------------------------------------------------------------

def check_masses(ds=(2, 3, 4, 5), t_top: float = 1.0) -> CheckResult:
    def run():
        worst = 0.0
        for d in ds:
            t0 = 0.5 * critical_time(d, t_top)
            data = SubcriticalData.compute(d, t0, t_top)
            fam = MeasureFamily(data, check_x_hat=False)
            for k in range(1, d + 1):
                worst = max(worst, abs(fam.mass(k) - (1.0 - (k - 1.0) / d)))
        return worst <= 1e-8, f"max |mass - target| = {worst:.2e} over d in {tuple(ds)}"
    (ok, detail), dt = _timed(run)
    return CheckResult("masses", ok, detail, dt)


# -- 3 ------------------------------------------------------------------------

def check_sqrt_edge(data: SubcriticalData) -> CheckResult:
    def run():
        xs = data.x_star
        grid = xs * np.linspace(0.95, 0.999, 25)
        dens = np.array([density_mu1(data, x) for x in grid])
        slope = np.polyfit(np.log(xs - grid), np.log(dens), 1)[0]
        return abs(slope - 0.5) <= 0.05, f"edge exponent {slope:.4f}"
    (ok, detail), dt = _timed(run)
    return CheckResult("square-root edge", ok, detail, dt)


# -- 4 ------------------------------------------------------------------------

def check_variational(fam: MeasureFamily) -> CheckResult:
    def run():
        rep = fam.variational_residual()
        detail = (f"eq1 {rep.eq1_max:.2e}, ineq max {rep.ineq_max:.2e}, "
                  f"eqk {max(rep.eqk_max.values()) if rep.eqk_max else 0.0:.2e}")
        ok = rep.eq1_max <= 1e-6 and rep.ineq_max < 0 and \
            all(v <= 1e-6 for v in rep.eqk_max.values())
        return ok, detail
    (ok, detail), dt = _timed(run)
    return CheckResult("variational conditions", ok, detail, dt)


# -- 5 ------------------------------------------------------------------------

def check_droplet(fam: MeasureFamily, seed: int = 7) -> CheckResult:
    data = fam.data

    def run():
        d = data.d
        b = droplet_mod.boundary(data, 512)
        m0 = droplet_mod.harmonic_moment(b, 0)
        mtop = droplet_mod.harmonic_moment(b, d + 1)
        err0 = abs(m0 - data.t0) / data.t0
        errtop = abs(mtop - data.t_top) / data.t_top
        others = max(abs(droplet_mod.harmonic_moment(b, k))
                     for k in range(2 * d + 4) if k not in (0, d + 1))
        schwarz = max(droplet_mod.schwarz_residual(data, th) for th in b.theta)
        rng = np.random.default_rng(seed)
        ext_worst = 0.0
        count = 0
        while count < 20:
            z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4)) * data.x_star
            if droplet_mod.contains(b, z) or abs(z) > 5 * data.x_star:
                continue
            ext_worst = max(ext_worst, droplet_mod.exterior_cauchy_residual(fam, z))
            count += 1
        ok = (err0 <= 1e-10 and errtop <= 1e-10 and others <= 1e-10
              and schwarz <= 1e-9 and ext_worst <= 1e-6)
        return ok, (f"m0 rel {err0:.1e}, m(d+1) rel {errtop:.1e}, others {others:.1e}, "
                    f"schwarz {schwarz:.1e}, exterior-Cauchy {ext_worst:.1e}")
    (ok, detail), dt = _timed(run)
    return CheckResult("droplet", ok, detail, dt)


# -- 6 ------------------------------------------------------------------------

def check_curve(data: SubcriticalData, seed: int = 11) -> CheckResult:
    def run():
        d = data.d
        sc = curve_mod.compute_curve(data)
        beta_cf = curve_mod.beta_closed_form(data)
        errs = [abs(sc.c[d - 1] - data.t_top) / data.t_top]
        if d >= 3:
            errs.append(abs(sc.c[d - 2] - data.t0 * data.t_top) / (data.t0 * data.t_top))
        else:
            target = data.t0 * data.t_top + 1.0 / data.t_top
            errs.append(abs(sc.c[0] - target) / target)
        errs.append(abs(sc.beta - beta_cf) / beta_cf)
        positive = bool(np.all(sc.c > 0) and sc.beta > 0)
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(50):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) * data.x_star
            k = int(rng.integers(1, d + 2))
            worst = max(worst, curve_mod.curve_residual(data, sc, z, k))
        ok = max(errs) <= 1e-10 and positive and worst <= 1e-8
        return ok, (f"coeff rel errs {max(errs):.1e}, positive={positive}, "
                    f"on-surface residual {worst:.1e}")
    (ok, detail), dt = _timed(run)
    return CheckResult("spectral curve", ok, detail, dt)


# -- 7 ------------------------------------------------------------------------

def check_genairy(seed: int = 13) -> CheckResult:
    def run():
        rng = np.random.default_rng(seed)
        worst_ode = 0.0
        for d in (2, 3, 4):
            for _ in range(100):
                z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
                if abs(z) > 10:
                    z *= 10 / abs(z)
                st = genairy.p_eval(d, 0, z, max_deriv=d)
                worst_ode = max(worst_ode, st.ode_residual())
        worst_sum = 0.0
        for _ in range(50):
            d = int(rng.integers(2, 5))
            z = complex(rng.uniform(-6, 6), rng.uniform(-6, 6))
            stacks = [genairy.p_eval(d, l, z) for l in range(d + 1)]
            tot = SplitValue.zero()
            for s in stacks:
                tot = tot + s.value(0)
            scale = max(abs(s.value(0)) for s in stacks)
            worst_sum = max(worst_sum, abs(tot.to_complex()) / scale)
        grid = np.linspace(-2, 2, 17)
        worst_airy = 0.0
        for x in grid:
            ai, aip, _, _ = airy(x)
            st = genairy.p_eval(2, 0, x, max_deriv=1)
            worst_airy = max(worst_airy,
                             abs(st.value(0).to_complex() - ai),
                             abs(st.value(1).to_complex() - aip))
        worst_oracle = 0.0
        for d in (2, 3, 4):
            for z in (1 + 1j, -3.0, 5.0, 8j, -6 - 5j):
                a = genairy.p_eval(d, 0, z, max_deriv=min(2, d)).as_complex()
                b = genairy.p_series(d, 0, z, max_deriv=min(2, d)).as_complex()
                worst_oracle = max(worst_oracle,
                                   float(np.max(np.abs(a - b) / np.abs(b))))
        ok = (worst_ode <= 1e-10 and worst_sum <= 1e-12
              and worst_airy <= 1e-10 and worst_oracle <= 1e-10)
        return ok, (f"ODE {worst_ode:.1e}, sum rule {worst_sum:.1e}, "
                    f"Airy {worst_airy:.1e}, oracle {worst_oracle:.1e}")
    (ok, detail), dt = _timed(run)
    return CheckResult("generalized Airy", ok, detail, dt)


# -- 8/9 shared solves ---------------------------------------------------------

@dataclass
class MopSweep:
    data: SubcriticalData
    fam: MeasureFamily
    n_list: tuple
    polys: dict = field(default_factory=dict)
    zero_sets: dict = field(default_factory=dict)

    @classmethod
    def compute(cls, n_list=(6, 12, 18, 24)) -> "MopSweep":
        data = SubcriticalData.compute(3, 1.0 / 20, 2.0)
        fam = MeasureFamily(data)
        sweep = cls(data=data, fam=fam, n_list=tuple(n_list))
        for n in n_list:
            poly = mop.solve_P(data, n)
            sweep.polys[n] = poly
            sweep.zero_sets[n] = mop.zeros(poly)
        return sweep


#: distances below this (times x_star) count as "on the star": the d=3 zero
#: sets lie on the rays exactly, so measured distances are root-finder noise
DISTANCE_FLOOR = 1e-9


def check_mop_convergence(sweep: MopSweep) -> CheckResult:
    def run():
        xs = sweep.data.x_star
        dists = [sweep.zero_sets[n].max_distance for n in sweep.n_list]
        ks = [mop.ks_distance(sweep.zero_sets[n]) for n in sweep.n_list]
        floor = DISTANCE_FLOOR * xs
        dist_trend = all(b < a or b < floor for a, b in zip(dists, dists[1:]))
        dist_final = dists[-1] <= 0.05 * xs
        ks_trend = all(b < a for a, b in zip(ks, ks[1:]))
        ks_final = ks[-1] <= 0.1
        ok = dist_trend and dist_final and ks_trend and ks_final
        return ok, (f"dist/x*={['%.1e' % (v / xs) for v in dists]}, "
                    f"KS={['%.4f' % v for v in ks]}, "
                    f"trend(dist)={dist_trend}, trend(KS)={ks_trend}, "
                    f"KS(n={sweep.n_list[-1]})<=0.1: {ks_final}")
    (ok, detail), dt = _timed(run)
    return CheckResult("MOP zero convergence", ok, detail, dt)


def check_strong_asymptotics(sweep: MopSweep) -> CheckResult:
    def run():
        data = sweep.data
        m11 = parametrix.M11Evaluator(data)
        xs = data.x_star
        pts = [2 * xs, 2 * xs * cmath.exp(1j * math.pi / (data.d + 1)), 3j * xs]
        n_lo, n_hi = 12, 24
        ratios = []
        for z in pts:
            e_lo = abs(mop.strong_ratio(sweep.polys[n_lo], sweep.fam, m11, z) - 1)
            e_hi = abs(mop.strong_ratio(sweep.polys[n_hi], sweep.fam, m11, z) - 1)
            ratios.append(e_hi / e_lo)
        ok = all(r <= 0.7 for r in ratios)
        return ok, f"error ratios n=24/n=12: {['%.3f' % r for r in ratios]}"
    (ok, detail), dt = _timed(run)
    return CheckResult("strong asymptotics", ok, detail, dt)


# -- 10 -------------------------------------------------------------------------

def check_parametrix(data: SubcriticalData, seed: int = 17) -> CheckResult:
    def run():
        ev = parametrix.M11Evaluator(data, validate=False)
        rep = ev.eta_residue_check()
        res_ok = rep.ok
        rng = np.random.default_rng(seed)
        worst = 0.0
        count = 0
        while count < 50:
            z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4)) * data.x_star
            if ev._star_distance(z) < 0.2 * data.x_star:
                continue
            worst = max(worst, abs(ev.m11(z) - ev.m11_path(z)) / abs(ev.m11(z)))
            count += 1
        ok = res_ok and worst <= 1e-9
        return ok, f"residues ok={res_ok}, closed-vs-path {worst:.1e}"
    (ok, detail), dt = _timed(run)
    return CheckResult("parametrix", ok, detail, dt)


# -- runner ----------------------------------------------------------------------

def run_all(d: int = 3, t0: float = 0.05, t_top: float = 2.0,
            x_hat: float | None = None, include_mop: bool = True,
            n_list=(6, 12, 18, 24)) -> list[CheckResult]:
    params = ModelParams(d, t0, t_top, x_hat)
    data = SubcriticalData.from_params(params)
    fam = MeasureFamily(data)
    results = [
        check_critical_time(),
        check_masses(),
        check_sqrt_edge(data),
        check_variational(fam),
        check_droplet(fam),
        check_curve(data),
        check_genairy(),
        check_parametrix(data),
    ]
    if include_mop:
        sweep = MopSweep.compute(n_list)
        results.append(check_mop_convergence(sweep))
        results.append(check_strong_asymptotics(sweep))
    return results
