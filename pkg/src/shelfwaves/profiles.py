"""Depth profiles beta(eta) and compactly supported curvature profiles gamma(xi).

The depth enters every form through the weight h = exp(-beta); the curvature
enters through the metric factor p(xi, eta) = 1 + eta*gamma(xi).  Profiles are
immutable after construction and cheap to evaluate on arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.optimize import minimize_scalar

from .errors import ProfileError, SelfIntersectionError

# Strictness of beta' > 0, beta'' < 0 is decided on a finite grid up to this
# tolerance; downstream math only needs the sign on the quadrature grid.
STRICTNESS_TOL = 1e-12


@dataclass(frozen=True)
class DepthProfile:
    """Longitudinally uniform log-depth profile on the strip cross-section.

    beta maps [0, delta] -> R; the physical depth is H = exp(beta) and the
    Hilbert-space weight is h = exp(-beta).
    """

    delta: float
    family: str
    params: tuple
    beta: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    beta_prime: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    beta_double: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def weight(self, eta):
        """h(eta) = exp(-beta(eta))."""
        return np.exp(-self.beta(eta))

    def drift_weight(self, eta):
        """beta'(eta) * exp(-beta(eta)), the weight of the drift form."""
        return self.beta_prime(eta) * np.exp(-self.beta(eta))


@dataclass(frozen=True)
class CurvatureProfile:
    """Signed coastline curvature gamma(xi), identically zero for |xi| >= R.

    kappa_plus = sup gamma, kappa_minus = -inf gamma.  Positive gamma bends
    the strip toward the Dirichlet side eta = 0.
    """

    R: float
    family: str
    params: tuple
    gamma: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    kappa_plus: float = 0.0
    kappa_minus: float = 0.0

    def safety_margin(self, delta: float) -> float:
        """A = delta * max(kappa+, kappa-, 0); the strip embeds iff A < 1."""
        return delta * max(self.kappa_plus, self.kappa_minus, 0.0)

    def is_nonnegative(self) -> bool:
        return self.kappa_minus <= STRICTNESS_TOL


# ---------------------------------------------------------------------------
# depth families

def _log_depth(s):
    return (
        lambda eta: np.log1p(s * np.asarray(eta, dtype=float)),
        lambda eta: s / (1.0 + s * np.asarray(eta, dtype=float)),
        lambda eta: -(s ** 2) / (1.0 + s * np.asarray(eta, dtype=float)) ** 2,
    )


def _linear_depth(s):
    return (
        lambda eta: s * np.asarray(eta, dtype=float),
        lambda eta: np.full_like(np.asarray(eta, dtype=float), s),
        lambda eta: np.zeros_like(np.asarray(eta, dtype=float)),
    )


def _tanh_depth(s, w):
    def b(eta):
        return s * np.tanh(np.asarray(eta, dtype=float) / w)

    def bp(eta):
        return (s / w) / np.cosh(np.asarray(eta, dtype=float) / w) ** 2

    def bpp(eta):
        x = np.asarray(eta, dtype=float) / w
        return -(2.0 * s / w ** 2) * np.tanh(x) / np.cosh(x) ** 2

    return b, bp, bpp


def make_depth_profile(family: str, params, delta: float) -> DepthProfile:
    """Construct a builtin depth profile.

    Families:
      "log"       params (s,):      beta = log(1 + s*eta)
      "linear"    params (s,):      beta = s*eta
      "tanh"      params (s, w):    beta = s*tanh(eta/w)
      "tabulated" params = samples of beta at uniform nodes on [0, delta],
                  evaluated with a C^2 cubic spline.
    """
    if delta <= 0:
        raise ProfileError(f"strip width must be positive, got delta={delta}")
    params = tuple(float(p) for p in np.atleast_1d(params))
    if family == "log":
        (s,) = params
        if 1.0 + s * delta <= 0:
            raise ProfileError("log-depth profile: 1 + s*eta <= 0 on [0, delta]")
        b, bp, bpp = _log_depth(s)
    elif family == "linear":
        (s,) = params
        b, bp, bpp = _linear_depth(s)
    elif family == "tanh":
        s, w = params
        if w <= 0:
            raise ProfileError("tanh ramp needs a positive width parameter")
        b, bp, bpp = _tanh_depth(s, w)
    elif family == "tabulated":
        if len(params) < 4:
            raise ProfileError("tabulated depth needs at least 4 samples")
        nodes = np.linspace(0.0, delta, len(params))
        spline = CubicSpline(nodes, np.asarray(params))
        b, bp, bpp = spline, spline.derivative(1), spline.derivative(2)
    else:
        raise ProfileError(f"unknown depth family {family!r}")

    check = b(np.linspace(0.0, delta, 257))
    if not np.all(np.isfinite(check)):
        raise ProfileError(f"beta is not finite on [0, {delta}]")
    return DepthProfile(delta=float(delta), family=family, params=params,
                        beta=b, beta_prime=bp, beta_double=bpp)


def validate_theorem_hypotheses(d: DepthProfile, n_check: int = 64) -> dict:
    """Sample beta', beta'' at Chebyshev points of (0, delta).

    monotone         <=> beta'  > 0 (up to STRICTNESS_TOL) everywhere sampled
    strictly_concave <=> beta'' < 0 (up to STRICTNESS_TOL) everywhere sampled
    """
    if n_check < 16:
        raise ValueError("n_check must be at least 16")
    j = np.arange(n_check)
    eta = 0.5 * d.delta * (1.0 - np.cos(np.pi * (2 * j + 1) / (2 * n_check)))
    bp = np.asarray(d.beta_prime(eta), dtype=float)
    bpp = np.asarray(d.beta_double(eta), dtype=float)
    return {
        "monotone": bool(np.min(bp) > STRICTNESS_TOL),
        "strictly_concave": bool(np.max(bpp) < -STRICTNESS_TOL),
        "concave": bool(np.max(bpp) < STRICTNESS_TOL),
        "min_beta_prime": float(np.min(bp)),
        "max_beta_double": float(np.max(bpp)),
    }


# ---------------------------------------------------------------------------
# curvature families

def _bump(a, R, center=0.0, radius=None):
    r = R if radius is None else radius

    def g(xi):
        t = (np.asarray(xi, dtype=float) - center) / r
        out = np.zeros_like(t)
        inside = np.abs(t) < 1.0
        ti = t[inside]
        out[inside] = a * np.exp(1.0 - 1.0 / (1.0 - ti ** 2))
        return out

    return g


def make_curvature_profile(family: str, params, R: float) -> CurvatureProfile:
    """Construct a builtin curvature profile, identically zero outside [-R, R].

    Families:
      "zero"      no params:   gamma == 0
      "bump"      params (a,): a * exp(1 - 1/(1 - (xi/R)^2)) for |xi| < R
      "bumps"     params = flat (a_i, c_i, r_i) triples, each bump supported
                  in [c_i - r_i, c_i + r_i] which must lie inside [-R, R]
      "tabulated" params = samples at uniform nodes on [-R, R]; both end
                  samples must vanish; C^2 spline inside, zero outside.
    """
    if R <= 0:
        raise ProfileError(f"support radius must be positive, got R={R}")
    params = tuple(float(p) for p in np.atleast_1d(params)) if np.size(params) else ()

    if family == "zero":
        g = lambda xi: np.zeros_like(np.asarray(xi, dtype=float))
    elif family == "bump":
        (a,) = params
        g = _bump(a, R)
    elif family == "bumps":
        if len(params) % 3 != 0 or not params:
            raise ProfileError("bumps family expects flat (a, center, radius) triples")
        triples = [params[i:i + 3] for i in range(0, len(params), 3)]
        for a, c, r in triples:
            if r <= 0 or abs(c) + r > R:
                raise ProfileError("each bump must have r > 0 and support inside [-R, R]")
        gs = [_bump(a, R, center=c, radius=r) for a, c, r in triples]
        g = lambda xi: sum(gi(xi) for gi in gs)
    elif family == "tabulated":
        if len(params) < 4:
            raise ProfileError("tabulated curvature needs at least 4 samples")
        if abs(params[0]) > STRICTNESS_TOL or abs(params[-1]) > STRICTNESS_TOL:
            raise ProfileError("tabulated curvature must vanish at |xi| = R")
        nodes = np.linspace(-R, R, len(params))
        # clamped spline: zero value and slope at the support edge
        spline = CubicSpline(nodes, np.asarray(params), bc_type="clamped")

        def g(xi):
            x = np.asarray(xi, dtype=float)
            out = np.zeros_like(x)
            inside = np.abs(x) < R
            out[inside] = spline(x[inside])
            return out
    else:
        raise ProfileError(f"unknown curvature family {family!r}")

    kp, km = _curvature_extremes(g, R)
    return CurvatureProfile(R=float(R), family=family, params=params,
                            gamma=g, kappa_plus=kp, kappa_minus=km)


def _curvature_extremes(g, R, n_samples: int = 4096):
    """kappa+ = sup gamma, kappa- = -inf gamma by dense sampling plus local
    golden-section refinement around the best samples."""
    xi = np.linspace(-R, R, n_samples)
    vals = np.asarray(g(xi), dtype=float)
    h = xi[1] - xi[0]

    def refine(sign):
        i = int(np.argmax(sign * vals))
        lo, hi = max(-R, xi[i] - h), min(R, xi[i] + h)
        res = minimize_scalar(lambda x: -sign * g(np.array([x]))[0],
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-14})
        return max(sign * vals[i], -res.fun)

    kp = max(refine(+1.0), 0.0)
    km = max(refine(-1.0), 0.0)
    return float(kp), float(km)


def curvature_moments(c: CurvatureProfile, delta: float):
    """Moments m1 = int gamma, m2 = int gamma^2 over the support, and the
    safety margin A = delta * max(kappa+, kappa-, 0).  Raises if A >= 1."""
    A = c.safety_margin(delta)
    if A >= 1.0:
        raise SelfIntersectionError(
            f"strip self-intersects: delta*max(kappa+,kappa-) = {A} >= 1")
    if c.family == "zero":
        return 0.0, 0.0, A
    m1, _ = quad(lambda x: c.gamma(np.array([x]))[0], -c.R, c.R,
                 epsabs=1e-13, epsrel=1e-13, limit=200)
    m2, _ = quad(lambda x: c.gamma(np.array([x]))[0] ** 2, -c.R, c.R,
                 epsabs=1e-13, epsrel=1e-13, limit=200)
    return float(m1), float(m2), A
