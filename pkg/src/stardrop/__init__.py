"""stardrop: the subcritical star ensemble made computable.

Equilibrium measures on star-like sets, the Laplacian-growth droplet, the
spectral curve, generalized Airy weights, and the associated multiple
orthogonal polynomials, with quadrature-backed verification of the
identities tying them together.
"""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    ModelParams,
    SubcriticalData,
    critical_time,
    r_crit,
    rho,
    solve_r,
    x_star,
)
from .surface import BranchSet, KappaTable, Sector, branches, eta, kappa_table, psi, sector_of, xi  # noqa: F401
from .equilibrium import MeasureFamily, PotentialEval, density_mu1, density_muk  # noqa: F401
from .droplet import DropletBoundary, boundary, exterior_cauchy_residual, harmonic_moment, schwarz_residual  # noqa: F401
from .curve import SpectralCurve, beta_closed_form, compute_curve, curve_residual  # noqa: F401
from .genairy import AiryStack, asymptotic_check, p_eval, p_series  # noqa: F401
from .mop import MomentSystem, MonicPolynomial, ZeroSet, assemble_moments, ks_distance, solve_P, strong_ratio, weight_v, zeros  # noqa: F401
from .parametrix import M11Evaluator  # noqa: F401
from .splitnum import SplitValue  # noqa: F401
