"""Exception types shared across the toolkit."""


class ShelfwavesError(Exception):
    """Base class for all toolkit errors."""


class ProfileError(ShelfwavesError):
    """Invalid depth or curvature profile (unknown family, bad parameters,
    non-finite values, nonzero tabulated curvature outside the support)."""


class SelfIntersectionError(ShelfwavesError):
    """The strip self-intersects: delta * max(kappa+, kappa-, 0) >= 1,
    equivalently 1 + eta*gamma(xi) <= 0 somewhere in the strip."""


class DegenerateDriftError(ShelfwavesError):
    """The drift form <B phi, phi> vanishes (beta' == 0), so the Rayleigh
    quotients and the dispersion curve degenerate to zero."""


class HypothesisViolationError(ShelfwavesError):
    """A depth/curvature profile fails the hypotheses the trapping
    constants rely on (e.g. I1 >= 0 because beta is not concave)."""


class BoundaryHitError(ShelfwavesError):
    """The dispersion maximum was found at the edge of the search bracket;
    the bracket must be widened."""


class SolverError(ShelfwavesError):
    """Factorization failure or eigensolver non-convergence."""
