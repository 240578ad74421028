"""Command-line front end: batch computations and machine-readable reports.

Every subcommand emits a versioned JSON report (schema "1") or CSV tables.
Exit codes: 0 = success, 2 = a numerical check failed, 3 = invalid
configuration.  Flag values override config-file values override defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import __version__
from . import curve as curve_mod
from . import droplet as droplet_mod
from . import genairy, mop, verify
from .equilibrium import MeasureFamily
from .model import ModelParams, SubcriticalData
from .errors import SupercriticalError

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_BAD_CONFIG = 3

_DEFAULTS = {
    "d": 3,
    "t0": 0.05,
    "t_top": 2.0,
    "x_hat": None,
    "n": None,
    "precision_bits": None,
    "grid": 200,
    "moments": None,
    "format": "json",
    "out": None,
    "seed": 0,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(EXIT_BAD_CONFIG)


def _build_parser() -> _Parser:
    p = _Parser(prog="stardrop",
                description="Equilibrium measures, droplets, spectral curves and "
                            "multiple orthogonal polynomials on (d+1)-stars.")
    p.add_argument("--version", action="version", version=f"stardrop {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, hlp in [
        ("params", "critical quantities r, x*, rho, t0_crit"),
        ("density", "equilibrium density grids"),
        ("droplet", "droplet boundary and harmonic moments"),
        ("curve", "spectral-curve coefficients"),
        ("airy", "generalized Airy function values"),
        ("mop", "multiple orthogonal polynomials and zero statistics"),
        ("verify", "run the acceptance suite"),
    ]:
        q = sub.add_parser(name, help=hlp)
        q.add_argument("--d", type=int)
        q.add_argument("--t0", type=float)
        q.add_argument("--t-top", dest="t_top", type=float)
        q.add_argument("--x-hat", dest="x_hat", type=float)
        q.add_argument("--n", type=int, action="append",
                       help="polynomial degree (repeatable; multiples of d)")
        q.add_argument("--precision-bits", dest="precision_bits", type=int)
        q.add_argument("--grid", type=int, help="grid size for sampled outputs")
        q.add_argument("--moments", type=int, help="highest harmonic moment index")
        q.add_argument("--format", choices=("json", "csv"))
        q.add_argument("--out", type=str, help="output path (default stdout)")
        q.add_argument("--seed", type=int, help="seed for sampled check points")
        q.add_argument("--config", type=str, help="JSON config file mirroring flags")
        if name == "verify":
            q.add_argument("--skip-mop", action="store_true",
                           help="skip the polynomial sweep (criteria on zero "
                                "convergence and strong asymptotics)")
        if name == "airy":
            q.add_argument("--ell", type=int, default=0)
            q.add_argument("--radius", type=float, default=5.0)
    return p


def _effective_config(args: argparse.Namespace) -> dict:
    cfg = dict(_DEFAULTS)
    path = getattr(args, "config", None)
    if path:
        try:
            with open(path) as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot read config file {path}: {exc}") from exc
        unknown = set(file_cfg) - set(_DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_cfg)
    for key in _DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def _report(command: str, cfg: dict, outputs: dict, diagnostics: dict) -> dict:
    inputs = {k: cfg[k] for k in ("d", "t0", "t_top", "x_hat", "seed")}
    return {
        "schema": "1",
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "diagnostics": diagnostics,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_json(report: dict, out: str | None):
    _emit(json.dumps(report, sort_keys=True, indent=2), out)


def _emit_csv(header: list[str], rows, out: str | None):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    _emit(buf.getvalue(), out)


def _data_from(cfg: dict) -> SubcriticalData:
    params = ModelParams(cfg["d"], cfg["t0"], cfg["t_top"], cfg["x_hat"])
    return SubcriticalData.from_params(params)


# -- subcommand implementations --------------------------------------------------


def _cmd_params(cfg):
    data = _data_from(cfg)
    outputs = {
        "r": data.r,
        "x_star": data.x_star,
        "rho": data.rho,
        "a": data.a,
        "t0_crit": data.t0_crit,
        "x_hat": data.x_hat,
    }
    diag = {"r_residual": data.residual()}
    _emit_json(_report("params", cfg, outputs, diag), cfg["out"])
    return EXIT_OK


def _cmd_density(cfg):
    data = _data_from(cfg)
    fam = MeasureFamily(data)
    n = cfg["grid"]
    tables = {k: fam.density_table(k, n) for k in range(1, data.d + 1)}
    if cfg["format"] == "csv":
        s_grid = tables[2][:, 0] if data.d >= 2 else tables[1][:, 0]
        header = ["ray_coordinate"] + [f"density_{k}" for k in range(1, data.d + 1)]
        rows = []
        for i, s in enumerate(s_grid):
            row = [repr(float(s))]
            for k in range(1, data.d + 1):
                if k == 1:
                    row.append(repr(float(fam.density(1, s))) if s < data.x_star else "")
                else:
                    row.append(repr(float(tables[k][i, 1])))
            rows.append(row)
        _emit_csv(header, rows, cfg["out"])
        return EXIT_OK
    outputs = {
        "masses": {str(k): fam.mass(k) for k in range(1, data.d + 1)},
        "density": {str(k): tables[k].tolist() for k in tables},
        "ell1": fam.ell1,
    }
    diag = {"mass_errors": {str(k): fam.mass_error(k) for k in range(1, data.d + 1)},
            "s_max": fam.s_max}
    _emit_json(_report("density", cfg, outputs, diag), cfg["out"])
    return EXIT_OK


def _cmd_droplet(cfg):
    data = _data_from(cfg)
    n_grid = max(cfg["grid"], 512)
    b = droplet_mod.boundary(data, n_grid)
    if cfg["format"] == "csv":
        _emit_csv(["theta", "re", "im"],
                  [(repr(float(t)), repr(float(p.real)), repr(float(p.imag)))
                   for t, p in zip(b.theta, b.points)], cfg["out"])
        return EXIT_OK
    kmax = cfg["moments"] if cfg["moments"] is not None else 2 * data.d + 3
    moments = [droplet_mod.harmonic_moment(b, k) for k in range(kmax + 1)]
    schwarz = max(droplet_mod.schwarz_residual(data, th)
                  for th in np.linspace(0, 2 * math.pi, 128, endpoint=False))
    outputs = {
        "moments": [[m.real, m.imag] for m in moments],
        "area_over_pi": moments[0].real,
    }
    diag = {"schwarz_residual_max": schwarz, "n_theta": n_grid,
            "boundary_simple": droplet_mod.polygon_is_simple(b)}
    _emit_json(_report("droplet", cfg, outputs, diag), cfg["out"])
    return EXIT_OK


def _cmd_curve(cfg):
    data = _data_from(cfg)
    sc = curve_mod.compute_curve(data)
    rng = np.random.default_rng(cfg["seed"])
    worst = 0.0
    for _ in range(50):
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) * data.x_star
        k = int(rng.integers(1, data.d + 2))
        worst = max(worst, curve_mod.curve_residual(data, sc, z, k))
    outputs = {"c": sc.c.tolist(), "beta": sc.beta,
               "beta_closed_form": curve_mod.beta_closed_form(data)}
    diag = {"lstsq_residual": sc.lstsq_residual, "on_surface_residual_max": worst}
    _emit_json(_report("curve", cfg, outputs, diag), cfg["out"])
    return EXIT_OK


def _cmd_airy(cfg, ell: int, radius: float):
    d = cfg["d"]
    n = max(cfg["grid"] // 10, 8)
    xs = np.linspace(0.0, radius, n + 1)[1:]
    rows = []
    worst = 0.0
    for x in xs:
        st = genairy.p_eval(d, ell, x, max_deriv=d)
        worst = max(worst, st.ode_residual())
        v = st.value(0)
        rows.append({"x": float(x), "re": v.mantissa.real, "im": v.mantissa.imag,
                     "exponent": v.exponent, "value": _finite_or_none(v)})
    if cfg["format"] == "csv":
        _emit_csv(["x", "mantissa_re", "mantissa_im", "exponent"],
                  [(repr(r["x"]), repr(r["re"]), repr(r["im"]), r["exponent"])
                   for r in rows], cfg["out"])
        return EXIT_OK
    outputs = {"ell": ell, "values": rows}
    diag = {"ode_residual_max": worst}
    _emit_json(_report("airy", cfg, outputs, diag), cfg["out"])
    return EXIT_OK


def _finite_or_none(v):
    try:
        c = v.to_complex()
        return [c.real, c.imag]
    except OverflowError:
        return None


def _cmd_mop(cfg):
    data = _data_from(cfg)
    n_list = cfg["n"] or [2 * data.d, 4 * data.d]
    per_n = {}
    last_zeros = None
    for n in sorted(n_list):
        poly = mop.solve_P(data, n, precision_bits=cfg["precision_bits"],
                           n_max=max(mop.N_MAX_DEFAULT, n))
        zs = mop.zeros(poly)
        last_zeros = zs
        per_n[str(n)] = {
            "ks_distance": mop.ks_distance(zs),
            "max_star_distance": zs.max_distance,
            "condition_residual": poly.condition_residual,
            "precision_bits": poly.precision_bits,
            "zeros": [[z.real, z.imag] for z in zs.zeros],
        }
    if cfg["format"] == "csv":
        _emit_csv(["re", "im", "modulus", "ray_angle"],
                  [tuple(map(repr, map(float, row))) for row in last_zeros.table()],
                  cfg["out"])
        return EXIT_OK
    outputs = {"n": sorted(n_list), "results": per_n}
    diag = {"x_star": data.x_star}
    _emit_json(_report("mop", cfg, outputs, diag), cfg["out"])
    return EXIT_OK


def _cmd_verify(cfg, skip_mop: bool):
    results = verify.run_all(cfg["d"], cfg["t0"], cfg["t_top"], cfg["x_hat"],
                             include_mop=not skip_mop)
    for res in results:
        print(res.line())
    ok = all(r.passed for r in results)
    outputs = {"checks": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                          for r in results],
               "all_passed": ok}
    if cfg["out"]:
        _emit_json(_report("verify", cfg, outputs, {}), cfg["out"])
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _effective_config(args)
        if args.command == "params":
            return _cmd_params(cfg)
        if args.command == "density":
            return _cmd_density(cfg)
        if args.command == "droplet":
            return _cmd_droplet(cfg)
        if args.command == "curve":
            return _cmd_curve(cfg)
        if args.command == "airy":
            return _cmd_airy(cfg, args.ell, args.radius)
        if args.command == "mop":
            return _cmd_mop(cfg)
        if args.command == "verify":
            return _cmd_verify(cfg, args.skip_mop)
        raise ValueError(f"unknown command {args.command}")
    except (ValueError, SupercriticalError) as exc:
        sys.stderr.write(f"invalid configuration: {exc}\n")
        return EXIT_BAD_CONFIG
    except ArithmeticError as exc:
        sys.stderr.write(f"numerical check failed: {exc}\n")
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
