"""One-dimensional transversal pencil on the strip cross-section (0, delta).

Piecewise-linear finite elements in the weighted space L2((0, delta); h),
h = exp(-beta), with an essential Dirichlet condition at eta = 0 and a
natural Neumann condition at eta = delta.  The pencil reads

    alpha * B phi = omega * (K + alpha^2 * W) phi

with K the weighted stiffness, W the weighted mass and B the drift mass
(weight beta' * exp(-beta)).  K + alpha^2 W is the positive definite factor,
so the problem is solved as a generalized symmetric-definite eigenproblem
without ever inverting the possibly semidefinite B.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DegenerateDriftError, SolverError
from .profiles import DepthProfile

# 2-point Gauss rule on [-1, 1]
_GPTS = np.array([-1.0, 1.0]) / np.sqrt(3.0)
_GWTS = np.array([1.0, 1.0])

# below this matrix dimension a dense eigensolve is cheaper than Lanczos
_DENSE_CUTOFF = 300

DRIFT_TOL = 1e-14


@dataclass(frozen=True)
class TransversalGrid:
    """Uniform piecewise-linear grid 0 = eta_0 < ... < eta_n = delta."""

    n: int
    delta: float
    nodes: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least 2 cells")
        if self.nodes is None:
            object.__setattr__(self, "nodes",
                               np.linspace(0.0, self.delta, self.n + 1))

    @property
    def h(self) -> float:
        return self.delta / self.n


@dataclass(frozen=True)
class TransversalForms:
    """Assembled tridiagonal forms with the Dirichlet row/column eliminated.

    Free nodes are eta_1 .. eta_n (dimension n); the constrained value at
    eta_0 = 0 is implicit.
    """

    grid: TransversalGrid
    K: sp.csr_matrix = field(repr=False)  # int e^{-beta} phi' psi'
    W: sp.csr_matrix = field(repr=False)  # int e^{-beta} phi  psi
    B: sp.csr_matrix = field(repr=False)  # int beta' e^{-beta} phi psi

    @property
    def dim(self) -> int:
        return self.K.shape[0]

    def with_dirichlet(self, phi_free: np.ndarray) -> np.ndarray:
        """Prepend the constrained zero value at eta = 0."""
        return np.concatenate(([0.0], phi_free))


@dataclass
class TransversalMode:
    """Single pencil eigenpair at wavenumber alpha."""

    alpha: float
    omega: float
    phi: np.ndarray  # free nodal coefficients (eta_1 .. eta_n)
    J1: float
    J2: float
    residual: float


def _gauss_points(grid: TransversalGrid):
    """Physical Gauss points and scaled weights per cell, shape (n, 2)."""
    left = grid.nodes[:-1]
    h = grid.h
    pts = left[:, None] + 0.5 * h * (1.0 + _GPTS[None, :])
    wts = np.broadcast_to(0.5 * h * _GWTS, pts.shape)
    return pts, wts


def _assemble_tridiag(grid: TransversalGrid, weight_at):
    """Mass-type tridiagonal matrix int w(eta) phi_i phi_j for a nodal P1
    basis, by per-cell 2-point Gauss quadrature.  Returns full (n+1)-dim."""
    pts, wts = _gauss_points(grid)
    w = weight_at(pts) * wts
    h = grid.h
    # reference shapes at the two Gauss points
    s0 = 0.5 * (1.0 - _GPTS)  # left node
    s1 = 0.5 * (1.0 + _GPTS)  # right node
    e00 = w @ (s0 * s0)
    e01 = w @ (s0 * s1)
    e11 = w @ (s1 * s1)
    n = grid.n
    diag = np.zeros(n + 1)
    diag[:-1] += e00
    diag[1:] += e11
    return sp.diags([e01, diag, e01], offsets=[-1, 0, 1], format="csr")


def _assemble_stiff(grid: TransversalGrid, weight_at):
    pts, wts = _gauss_points(grid)
    w = (weight_at(pts) * wts).sum(axis=1)  # int_cell w
    h = grid.h
    c = w / h ** 2
    n = grid.n
    diag = np.zeros(n + 1)
    diag[:-1] += c
    diag[1:] += c
    return sp.diags([-c, diag, -c], offsets=[-1, 0, 1], format="csr")


def assemble_transversal_forms(grid: TransversalGrid,
                               d: DepthProfile) -> TransversalForms:
    """Assemble K, W, B with the Dirichlet node eliminated."""
    if abs(grid.delta - d.delta) > 1e-12 * max(1.0, d.delta):
        raise ValueError("grid width does not match the depth profile width")
    K = _assemble_stiff(grid, d.weight)
    W = _assemble_tridiag(grid, d.weight)
    B = _assemble_tridiag(grid, d.drift_weight)
    keep = slice(1, None)
    return TransversalForms(grid=grid,
                            K=K[keep, keep].tocsr(),
                            W=W[keep, keep].tocsr(),
                            B=B[keep, keep].tocsr())


def _normalize(forms: TransversalForms, v: np.ndarray) -> np.ndarray:
    """Weighted-norm normalization with the sign fixed by phi'(0) > 0
    (equivalently: first free nodal value positive)."""
    nrm = float(v @ (forms.W @ v))
    v = v / np.sqrt(nrm)
    if v[0] < 0.0:
        v = -v
    return v


def solve_transversal(forms: TransversalForms, alpha: float,
                      k: int = 1) -> list[TransversalMode]:
    """k largest-omega solutions of alpha*B*phi = omega*(K + alpha^2 W)*phi.

    Dense for small problems, Lanczos (with the definite factor on the
    right) otherwise.  alpha = 0 short-circuits to the zero spectrum.
    """
    dim = forms.dim
    if not 1 <= k <= dim:
        raise ValueError(f"k must be in [1, {dim}]")
    if alpha == 0.0:
        # the drift form vanishes identically at alpha = 0
        modes = []
        for j in range(k):
            phi = np.zeros(dim)
            phi[j] = 1.0
            phi = _normalize(forms, phi)
            modes.append(TransversalMode(alpha=0.0, omega=0.0, phi=phi,
                                         J1=np.nan, J2=np.nan, residual=0.0))
        return modes

    A = (alpha * forms.B).tocsr()
    M = (forms.K + alpha ** 2 * forms.W).tocsr()
    try:
        if dim <= _DENSE_CUTOFF or k > dim // 4:
            vals, vecs = sla.eigh(A.toarray(), M.toarray())
            vals, vecs = vals[::-1], vecs[:, ::-1]
        else:
            # fixed seeded start vector keeps repeated runs bit-reproducible
            v0 = np.random.default_rng(0).standard_normal(dim)
            vals, vecs = spla.eigsh(A, k=k, M=M, which="LA", v0=v0)
            order = np.argsort(vals)[::-1]
            vals, vecs = vals[order], vecs[:, order]
    except (sla.LinAlgError, RuntimeError, spla.ArpackError) as exc:
        raise SolverError(f"transversal eigensolve failed: {exc}") from exc

    modes = []
    for j in range(k):
        phi = _normalize(forms, vecs[:, j])
        omega = float(vals[j])
        res = float(np.linalg.norm(alpha * (forms.B @ phi) - omega * (M @ phi)))
        bphi = float(phi @ (forms.B @ phi))
        if bphi > DRIFT_TOL:
            J1, J2 = j_functionals(phi, forms)
        else:
            J1 = J2 = np.nan
        modes.append(TransversalMode(alpha=alpha, omega=omega, phi=phi,
                                     J1=J1, J2=J2, residual=res))
    return modes


def solve_transversal_symbol(forms: TransversalForms, drift: float,
                             dispersion: float, k: int = 1):
    """Top-k eigenvalues of drift*B*phi = omega*(K + dispersion*W)*phi.

    Generalization of solve_transversal used by the 2D separation-of-
    variables oracle, where a discrete longitudinal mode contributes
    distinct drift and dispersion symbol values instead of (alpha, alpha^2).
    """
    dim = forms.dim
    if dispersion < 0:
        raise ValueError("dispersion coefficient must be nonnegative")
    A = (drift * forms.B).toarray()
    M = (forms.K + dispersion * forms.W).toarray()
    vals = sla.eigh(A, M, eigvals_only=True)
    return vals[::-1][:k]


def j_functionals(phi: np.ndarray, forms: TransversalForms):
    """Quotients J1 = <W phi, phi>/<B phi, phi>, J2 = <K phi, phi>/<B phi, phi>."""
    b = float(phi @ (forms.B @ phi))
    scale = float(phi @ (forms.W @ phi))
    if b <= DRIFT_TOL * max(scale, 1.0):
        raise DegenerateDriftError("drift form <B phi, phi> vanishes (beta' == 0?)")
    J1 = scale / b
    J2 = float(phi @ (forms.K @ phi)) / b
    return J1, J2


def rayleigh_quotient(phi: np.ndarray, forms: TransversalForms,
                      alpha: float) -> float:
    """J_alpha(phi) = (alpha*J1 + J2/alpha)^(-1); equals the direct pencil
    quotient <m_alpha phi, phi>/<l_alpha phi, phi> to round-off."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    J1, J2 = j_functionals(phi, forms)
    return 1.0 / (alpha * J1 + J2 / alpha)


def optimal_alpha(phi: np.ndarray, forms: TransversalForms) -> float:
    """Maximizer alpha*(phi) = sqrt(J2/J1) of alpha -> J_alpha(phi)."""
    J1, J2 = j_functionals(phi, forms)
    if J1 <= 0:
        raise DegenerateDriftError("J1 must be positive")
    return float(np.sqrt(J2 / J1))


def dispersion_upper_bound(d: DepthProfile, alpha, n_samples: int = 2048):
    """Analytic bound omega_alpha <= (alpha*q + (pi^2/(4 delta^2)) q/alpha)^{-1}
    with q = inf e^{-beta} / sup(beta' e^{-beta}), sampled densely."""
    eta = np.linspace(0.0, d.delta, n_samples)
    q = float(np.min(d.weight(eta)) / np.max(d.drift_weight(eta)))
    alpha = np.asarray(alpha, dtype=float)
    return 1.0 / (alpha * q + (np.pi ** 2 / (4.0 * d.delta ** 2)) * q / alpha)
