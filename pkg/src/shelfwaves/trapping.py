"""Trapping constants and the sufficient-condition verdicts.

For a monotone, concave depth profile the constants

    I1 = int_0^delta eta e^{-beta} (|phi*'|^2 - alpha^2 |phi*|^2) deta  (< 0)
    I2 = F * alpha^2 * int_0^delta eta^2 e^{-beta} |phi*|^2 deta       (>= 0)
    C_beta = I2 / (-I1)

control the defect D_gamma <= I1*m1 + I2*m2 of the curved-strip quadratic
form; the bend traps a mode whenever m1 = int gamma > C_beta * int gamma^2
= C_beta * m2 (integral criterion), in particular whenever
0 <= gamma < c_{beta,R} = C_beta/(2R) pointwise with gamma not identically
zero.  Both verdicts are sufficient-condition flags, not existence deciders.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, asdict

import numpy as np
from scipy.integrate import simpson

from .band import EssentialBand
from .errors import HypothesisViolationError, SelfIntersectionError
from .profiles import (CurvatureProfile, DepthProfile, curvature_moments,
                       validate_theorem_hypotheses)
from .transversal import _GPTS, _GWTS


@dataclass
class TrappingReport:
    I1: float
    I2: float
    C_beta: float
    c_beta_R: float
    m1: float
    m2: float
    A: float
    D_bound: float          # I1*m1 + I2*m2, what the theorem controls
    D_exact: float          # direct quadrature of the defect
    margin: float           # m1 - C_beta*m2, positive => integral verdict
    verdict_integral: bool | None
    verdict_pointwise: bool | None
    hypotheses: dict

    def to_dict(self) -> dict:
        return asdict(self)


def _eta_quadrature(band: EssentialBand, d: DepthProfile):
    """Gauss points, weights, and phi*, phi*' sampled per transversal cell
    (same per-cell 2-point rule as the form assembly)."""
    grid = band.grid
    phi = np.concatenate(([0.0], band.phi_star))
    h = grid.h
    left = grid.nodes[:-1]
    pts = left[:, None] + 0.5 * h * (1.0 + _GPTS[None, :])
    wts = np.broadcast_to(0.5 * h * _GWTS, pts.shape)
    s0 = 0.5 * (1.0 - _GPTS)
    s1 = 0.5 * (1.0 + _GPTS)
    phi_g = phi[:-1, None] * s0[None, :] + phi[1:, None] * s1[None, :]
    dphi_g = np.broadcast_to(((phi[1:] - phi[:-1]) / h)[:, None], pts.shape)
    return pts, wts, phi_g, dphi_g


def compute_I1(band: EssentialBand, d: DepthProfile) -> float:
    """Direct quadrature of I1 (negative for concave monotone depth)."""
    pts, wts, phi, dphi = _eta_quadrature(band, d)
    w = np.asarray(d.weight(pts))
    a2 = band.alpha_crit ** 2
    return float(np.sum(wts * pts * w * (dphi ** 2 - a2 * phi ** 2)))


def compute_I1_by_parts(band: EssentialBand, d: DepthProfile) -> float:
    """I1 via the integration-by-parts decomposition that exhibits its sign:

    I1 * int e^{-b} phi^2 =
        (-1/2 int b' e^{-b} phi^2 - 1/2 e^{-b(delta)} phi(delta)^2)
            * int e^{-b} phi^2
      + Lambda* alpha * (int eta b' e^{-b} phi^2 * int e^{-b} phi^2
                         - int b' e^{-b} phi^2 * int eta e^{-b} phi^2).
    """
    pts, wts, phi, _ = _eta_quadrature(band, d)
    w = np.asarray(d.weight(pts))
    bw = np.asarray(d.drift_weight(pts))
    p2 = phi ** 2
    n0 = float(np.sum(wts * w * p2))               # int e^{-b} phi^2
    n1 = float(np.sum(wts * pts * w * p2))         # int eta e^{-b} phi^2
    b0 = float(np.sum(wts * bw * p2))              # int b' e^{-b} phi^2
    b1 = float(np.sum(wts * pts * bw * p2))        # int eta b' e^{-b} phi^2
    phi_end = band.phi_star[-1]
    w_end = float(d.weight(np.array([d.delta]))[0])
    lam_a = band.lambda_star * band.alpha_crit
    return ((-0.5 * b0 - 0.5 * w_end * phi_end ** 2) * n0
            + lam_a * (b1 * n0 - b0 * n1)) / n0


def compute_I2(band: EssentialBand, d: DepthProfile,
               c: CurvatureProfile) -> float:
    """I2 = F * alpha^2 * int eta^2 e^{-beta} |phi*|^2, with F = 1 when
    gamma >= 0 everywhere and F = 1/(1-A) otherwise."""
    A = c.safety_margin(d.delta)
    if A >= 1.0:
        raise SelfIntersectionError(f"safety margin A = {A} >= 1")
    F = 1.0 if c.is_nonnegative() else 1.0 / (1.0 - A)
    pts, wts, phi, _ = _eta_quadrature(band, d)
    w = np.asarray(d.weight(pts))
    return float(F * band.alpha_crit ** 2
                 * np.sum(wts * pts ** 2 * w * phi ** 2))


def compute_C_beta(I1: float, I2: float) -> float:
    """C_beta = I2 / (-I1); requires I1 < 0."""
    if I1 >= 0:
        raise HypothesisViolationError(
            f"I1 = {I1} >= 0: the depth profile violates the concavity "
            "hypothesis, no trapping constant is defined")
    return I2 / (-I1)


def compute_D_gamma_exact(band: EssentialBand, d: DepthProfile,
                          c: CurvatureProfile, r: float,
                          n_xi: int = 4096) -> float:
    """Direct tensor quadrature of the defect

        D = int int gamma eta e^{-b} (|phi*'|^2 - a^2 |phi*|^2)
          + a^2 int int (eta^2 gamma^2 / (1 + eta gamma)) e^{-b} |phi*|^2.

    Independent of r as long as r > R (the integrand vanishes outside the
    curvature support)."""
    if r <= c.R:
        raise ValueError("truncation radius r must exceed the support R")
    if c.safety_margin(d.delta) >= 1.0:
        raise SelfIntersectionError("1 + eta*gamma <= 0 inside the strip")
    # xi quadrature restricted to the support, composite 2-point Gauss
    edges = np.linspace(-c.R, c.R, n_xi + 1)
    hx = edges[1] - edges[0]
    xg = (edges[:-1, None] + 0.5 * hx * (1.0 + _GPTS[None, :])).ravel()
    xw = np.full_like(xg, 0.5 * hx)
    gam = np.asarray(c.gamma(xg))

    pts, wts, phi, dphi = _eta_quadrature(band, d)
    w = np.asarray(d.weight(pts))
    a2 = band.alpha_crit ** 2

    m1 = float(np.sum(xw * gam))
    first = m1 * float(np.sum(wts * pts * w * (dphi ** 2 - a2 * phi ** 2)))

    # second term does not factorize because of 1/(1 + eta*gamma)
    eta_flat = pts.ravel()
    eta_w = (wts * pts ** 2 * w * phi ** 2).ravel()
    denom = 1.0 + eta_flat[None, :] * gam[:, None]
    if np.any(denom <= 0.0):
        raise SelfIntersectionError("1 + eta*gamma <= 0 at a quadrature point")
    second = a2 * float((xw * gam ** 2) @ (denom ** -1 @ eta_w))
    return first + second


def evaluate_criterion(band: EssentialBand, d: DepthProfile,
                       c: CurvatureProfile) -> TrappingReport:
    """Assemble the full trapping report with both verdicts.

    Hypothesis violations do not raise here; the verdicts are set to None
    (indeterminate) and the violation is recorded in the report.
    """
    hyp = validate_theorem_hypotheses(d)
    if hyp["monotone"] and not hyp["strictly_concave"] and hyp["concave"]:
        # the sign argument for I1 only needs beta'' <= 0
        warnings.warn("beta'' <= 0 holds only non-strictly; the trapping "
                      "constants remain valid but the strict hypothesis "
                      "fails", RuntimeWarning)
    m1, m2, A = curvature_moments(c, d.delta)
    I1 = compute_I1(band, d)
    I2 = compute_I2(band, d, c)
    ok = hyp["monotone"] and hyp["concave"] and I1 < 0.0
    if ok:
        C_beta = compute_C_beta(I1, I2)
        c_beta_R = C_beta / (2.0 * c.R)
        margin = m1 - C_beta * m2
        verdict_integral = bool(margin > 0.0)
        verdict_pointwise = bool(
            c.is_nonnegative() and (c.kappa_plus > 0.0)
            and c.kappa_plus < c_beta_R)
    else:
        C_beta = c_beta_R = margin = float("nan")
        verdict_integral = verdict_pointwise = None
    D_bound = I1 * m1 + I2 * m2
    D_exact = compute_D_gamma_exact(band, d, c, r=2.0 * c.R)
    return TrappingReport(I1=I1, I2=I2, C_beta=C_beta, c_beta_R=c_beta_R,
                          m1=m1, m2=m2, A=A, D_bound=D_bound,
                          D_exact=D_exact, margin=margin,
                          verdict_integral=verdict_integral,
                          verdict_pointwise=verdict_pointwise,
                          hypotheses=hyp)


def chebyshev_defect(f, g, interval) -> float:
    """(int x g f)(int f) - (int g f)(int x f) on the interval, by composite
    quadrature of uniform samples.

    Non-positive whenever f >= 0 and g is non-negative and non-increasing;
    the discrete value inherits the sign exactly because all four integrals
    share one nonnegative weight vector.
    """
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape or f.ndim != 1 or f.size < 3:
        raise ValueError("f and g must be equal-length 1-d samples (>= 3)")
    if np.any(f < 0):
        raise ValueError("f must be nonnegative")
    a, b = interval
    x = np.linspace(a, b, f.size)
    return float(simpson(x * g * f, x=x) * simpson(f, x=x)
                 - simpson(g * f, x=x) * simpson(x * f, x=x))
