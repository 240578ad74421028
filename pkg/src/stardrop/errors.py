"""Exception and warning types shared across the package."""


class SupercriticalError(ValueError):
    """Raised when t0 exceeds the critical time for the given (d, t_top)."""


class SectorBoundaryError(ValueError):
    """Raised when a point lies on (or too close to) a sector boundary ray."""


class ResidueMismatchError(ArithmeticError):
    """Raised when a numerically computed residue disagrees with its target."""


class QuadratureError(ArithmeticError):
    """Raised when a quadrature fails its internal convergence check."""


class SingularSystemError(ArithmeticError):
    """Raised when a moment system cannot be solved (degenerate at small n)."""


class BranchAmbiguityWarning(UserWarning):
    """Two branches have (numerically) equal modulus: the point is on a cut."""


class NearSupportWarning(UserWarning):
    """Evaluation point is very close to a measure's support."""
