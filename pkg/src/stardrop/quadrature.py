"""Shared quadrature helpers (double precision and mpmath variants)."""

from __future__ import annotations

import numpy as np
from mpmath import mp, mpf


def gauss_legendre(n: int, a: float = 0.0, b: float = 1.0):
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def edge_flattening_grid(x_star: float, n: int = 200):
    """Nodes/weights on [0, x_star] via x = x_star*sin^2(pi u/2), GL in u.

    The substitution removes the square-root vanishing of densities at
    x_star (and clusters near both endpoints), so plain GL converges
    spectrally.  Returns (x, w) such that sum(w*f(x)) ~ int_0^{x*} f.
    """
    u, wu = gauss_legendre(n, 0.0, 1.0)
    s, c = np.sin(np.pi * u / 2), np.cos(np.pi * u / 2)
    x = x_star * s * s
    dx = x_star * np.pi * s * c
    return x, wu * dx


def halfline_grid(scale: float, n: int = 400):
    """Nodes/weights on (0, inf) via s = scale*u/(1-u), GL in u.

    Adequate for smooth integrands with algebraic decay; used for sampled
    density grids and potential quadratures at ~1e-9 accuracy.  Mass-level
    accuracy (1e-12) goes through adaptive quadrature instead.
    """
    u, wu = gauss_legendre(n, 0.0, 1.0)
    s = scale * u / (1.0 - u)
    ds = scale / (1.0 - u) ** 2
    return s, wu * ds


# ---------------------------------------------------------------------------
# mpmath fixed-order Gauss-Legendre, nodes polished at working precision
# ---------------------------------------------------------------------------

_MP_GL_CACHE: dict[tuple[int, int], tuple[list, list]] = {}


def mp_gauss_legendre(n: int, dps: int):
    """Gauss-Legendre nodes/weights on [-1, 1] as mpf at `dps` digits.

    Double-precision nodes are polished by Newton iteration on the Legendre
    recurrence at dps+10 digits.  Results are cached per (n, dps).
    """
    key = (n, dps)
    if key in _MP_GL_CACHE:
        return _MP_GL_CACHE[key]
    x0, _ = np.polynomial.legendre.leggauss(n)
    old = mp.dps
    try:
        mp.dps = dps + 10

        def legendre(x):
            p0, p1 = mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            return p1, dp

        nodes, weights = [], []
        for xi in x0:
            x = mpf(float(xi))
            for _ in range(4):
                p, dp = legendre(x)
                x -= p / dp
            p, dp = legendre(x)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
    finally:
        mp.dps = old
    _MP_GL_CACHE[key] = (nodes, weights)
    return nodes, weights


