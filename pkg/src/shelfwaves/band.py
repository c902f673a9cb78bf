"""Dispersion curve, essential-spectrum band edge and edge eigenfunction.

The essential spectrum of the straight (and, by stability under compactly
supported bends, of the curved) strip is the symmetric band [-Omega*, Omega*],
where Omega* is the supremum over alpha > 0 of the top transversal pencil
eigenvalue omega_alpha.  The critical wavenumber alpha_crit maximizes the
dispersion curve and satisfies the fixed-point relation
alpha = sqrt(J2(phi_top(alpha)) / J1(phi_top(alpha))).
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryHitError, DegenerateDriftError
from .profiles import DepthProfile
from .transversal import (TransversalForms, TransversalGrid,
                          assemble_transversal_forms, dispersion_upper_bound,
                          optimal_alpha, solve_transversal)

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SearchParams:
    alpha_lo: float
    alpha_hi: float
    coarse_n: int = 48
    tol: float = 1e-8

    @classmethod
    def default(cls, delta: float) -> "SearchParams":
        # covers the physically meaningful wavenumber range
        return cls(alpha_lo=1e-2 / delta, alpha_hi=1e3 / delta)


@dataclass(frozen=True)
class DispersionCurve:
    """Samples (alpha, omega_alpha, analytic upper bound)."""

    alphas: np.ndarray
    omegas: np.ndarray
    bounds: np.ndarray

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["alpha", "omega", "bound"])
            for a, o, b in zip(self.alphas, self.omegas, self.bounds):
                wr.writerow([f"{a:.17g}", f"{o:.17g}", f"{b:.17g}"])


@dataclass(frozen=True)
class EssentialBand:
    """Band edge Omega*, critical wavenumber, and edge eigenfunction phi*.

    phi_star holds the free nodal values (eta_1..eta_n); the constrained
    zero at eta = 0 is implicit.  The band itself is [-Omega*, Omega*].
    """

    omega_star: float
    alpha_crit: float
    phi_star: np.ndarray = field(repr=False)
    grid: TransversalGrid
    diagnostics: dict = field(default_factory=dict, repr=False)

    @property
    def lambda_star(self) -> float:
        return 1.0 / self.omega_star

    @property
    def band(self):
        return (-self.omega_star, self.omega_star)


def dispersion_curve(d: DepthProfile, grid: TransversalGrid,
                     alphas) -> DispersionCurve:
    """Top pencil eigenvalue per alpha with the analytic bound recorded."""
    alphas = np.asarray(alphas, dtype=float)
    if np.any(alphas <= 0) or np.any(np.diff(alphas) <= 0):
        raise ValueError("alphas must be positive and strictly increasing")
    forms = assemble_transversal_forms(grid, d)
    omegas = np.array([solve_transversal(forms, a, k=1)[0].omega
                       for a in alphas])
    bounds = dispersion_upper_bound(d, alphas)
    return DispersionCurve(alphas=alphas, omegas=omegas, bounds=bounds)


def _top_omega(forms: TransversalForms, alpha: float) -> float:
    return solve_transversal(forms, alpha, k=1)[0].omega


def _golden_max(f, lo, hi, reltol):
    """Golden-section maximization of f on [lo, hi] to relative width reltol."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d_ = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d_)
    while (b - a) > reltol * max(abs(a), abs(b)):
        if fc >= fd:
            b, d_, fd = d_, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d_, fd
            d_ = a + _GOLDEN * (b - a)
            fd = f(d_)
    x = 0.5 * (a + b)
    return x, f(x)


def find_omega_star(d: DepthProfile, grid: TransversalGrid,
                    search: SearchParams | None = None) -> EssentialBand:
    """Locate the band edge by coarse log-spaced scan + golden-section
    refinement, cross-validated by the fixed-point iteration
    alpha <- sqrt(J2/J1) of the top eigenvector.  Returns the larger of the
    two candidates; both are recorded in the diagnostics."""
    if search is None:
        search = SearchParams.default(d.delta)
    if not (0 < search.alpha_lo < search.alpha_hi):
        raise ValueError("need 0 < alpha_lo < alpha_hi")
    if search.tol <= 0:
        raise ValueError("tol must be positive")

    forms = assemble_transversal_forms(grid, d)
    alphas = np.geomspace(search.alpha_lo, search.alpha_hi, search.coarse_n)
    omegas = np.array([_top_omega(forms, a) for a in alphas])

    if np.max(omegas) <= 1e-14:
        raise DegenerateDriftError(
            "no positive edge: the dispersion curve is identically zero "
            "(beta' == 0), the band degenerates to {0}")

    i = int(np.argmax(omegas))
    if i == 0 or i == len(alphas) - 1:
        raise BoundaryHitError(
            f"dispersion maximum at the bracket edge alpha={alphas[i]}; "
            "widen [alpha_lo, alpha_hi]")

    # unimodality is not assumed: the scan picks the bracket to refine
    a_scan, w_scan = _golden_max(lambda a: _top_omega(forms, a),
                                 alphas[i - 1], alphas[i + 1], search.tol)

    # fixed-point cross-validation, capped at 64 iterations
    a_fp = a_scan
    converged = False
    n_iter = 0
    for n_iter in range(1, 65):
        mode = solve_transversal(forms, a_fp, k=1)[0]
        a_next = optimal_alpha(mode.phi, forms)
        step = abs(a_next - a_fp) / a_fp
        a_fp = a_next
        if step < 1e-10:
            converged = True
            break
    if converged and search.alpha_lo <= a_fp <= search.alpha_hi:
        w_fp = _top_omega(forms, a_fp)
    else:
        warnings.warn("fixed-point alpha iteration did not converge; "
                      "falling back to the scan result", RuntimeWarning)
        a_fp, w_fp = a_scan, w_scan

    if w_fp >= w_scan:
        alpha_c, omega_s = a_fp, w_fp
    else:
        alpha_c, omega_s = a_scan, w_scan

    mode = solve_transversal(forms, alpha_c, k=1)[0]
    diagnostics = {
        "scan": {"alpha": a_scan, "omega": w_scan},
        "fixed_point": {"alpha": a_fp, "omega": w_fp,
                        "converged": converged, "iterations": n_iter},
    }
    return EssentialBand(omega_star=omega_s, alpha_crit=alpha_c,
                         phi_star=mode.phi, grid=grid,
                         diagnostics=diagnostics)


def verify_mode_ode(band: EssentialBand, d: DepthProfile,
                    grid: TransversalGrid | None = None) -> float:
    """Weighted L2 norm of the finite-difference residual of the edge ODE

        phi'' = beta' phi' + (alpha^2 - Lambda* alpha beta') phi,
        phi(0) = phi'(delta) = 0,

    evaluated on the nodal edge eigenfunction, plus boundary defects."""
    if grid is None:
        grid = band.grid
    phi = np.concatenate(([0.0], band.phi_star))
    eta = grid.nodes
    h = grid.h
    a = band.alpha_crit
    lam = band.lambda_star
    bp = np.asarray(d.beta_prime(eta), dtype=float)

    interior = slice(1, -1)
    d2 = (phi[2:] - 2.0 * phi[1:-1] + phi[:-2]) / h ** 2
    d1 = (phi[2:] - phi[:-2]) / (2.0 * h)
    coeff = a ** 2 - lam * a * bp[interior]
    res = d2 - bp[interior] * d1 - coeff * phi[interior]
    w = np.asarray(d.weight(eta[interior]), dtype=float)
    l2 = float(np.sqrt(np.sum(h * w * res ** 2)))

    # boundary defects: phi(0) (exact by construction) and phi'(delta)
    # by a second-order one-sided difference
    dphi_end = (3.0 * phi[-1] - 4.0 * phi[-2] + phi[-3]) / (2.0 * h)
    return l2 + abs(phi[0]) + abs(dphi_end)
