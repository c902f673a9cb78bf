"""Discretized pencil on the truncated curved strip [-L, L] x [0, delta].

Bilinear tensor-product elements with 2x2 Gauss quadrature of the weights
e^{-beta}, p^{+-1} and beta' e^{-beta}, where p(xi, eta) = 1 + eta*gamma(xi)
is the metric factor of the bend.  The stiffness-like form is

    Lh[psi, phi] = int int (p^{-1} d_xi psi d_xi phi
                            + p d_eta psi d_eta phi) e^{-beta},

and the drift form is assembled in the skew-symmetrized first-derivative
shape, which makes the matrix i * (real skew-symmetric), hence exactly
Hermitian regardless of quadrature:

    Mh[psi, phi] = -(i/2) int int beta' e^{-beta}
                   (d_xi psi conj(phi) - psi d_xi conj(phi)).

The essential condition psi = 0 holds at eta = 0; eta = delta is natural.
The artificial cuts at xi = +-L can be Dirichlet, Neumann (natural) or
periodic (wraparound coupling).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import SelfIntersectionError, SolverError
from .profiles import CurvatureProfile, DepthProfile

_G1 = np.array([-1.0, 1.0]) / np.sqrt(3.0)

CUT_TYPES = ("dirichlet", "neumann", "periodic")


@dataclass(frozen=True)
class DetectionTolerances:
    rel_gap: float = 1e-3
    loc_threshold: float = 0.9
    trunc_rel: float = 0.05


@dataclass(frozen=True)
class StripMesh2D:
    """Uniform tensor mesh with the metric factor precomputed at the 2x2
    Gauss points of every cell (shape (m, 2, n, 2))."""

    L: float
    m: int
    n: int
    delta: float
    xi_nodes: np.ndarray = field(repr=False)
    eta_nodes: np.ndarray = field(repr=False)
    p_samples: np.ndarray = field(repr=False)
    curvature: CurvatureProfile = field(repr=False)

    @property
    def hx(self) -> float:
        return 2.0 * self.L / self.m

    @property
    def hy(self) -> float:
        return self.delta / self.n


@dataclass(frozen=True)
class PencilForms2D:
    """Constrained sparse forms plus the weighted mass used for norms."""

    mesh: StripMesh2D
    cut_bc: str
    Lh: sp.csr_matrix = field(repr=False)       # real symmetric positive definite
    Mh: sp.csr_matrix = field(repr=False)       # complex Hermitian, i * skew
    mass: sp.csr_matrix = field(repr=False)     # int int e^{-beta} p psi phi
    node_xi: np.ndarray = field(repr=False)     # xi per retained dof
    node_eta: np.ndarray = field(repr=False)    # eta per retained dof

    @property
    def dim(self) -> int:
        return self.Lh.shape[0]


@dataclass
class SpectrumResult2D:
    """Ritz approximation of the top of the pencil spectrum."""

    eigenvalues: np.ndarray                 # descending
    eigenvectors: np.ndarray                # columns, weighted norm 1
    forms: PencilForms2D
    localization: np.ndarray                # weighted-norm fraction in the bend
    localization_radius: float
    truncation_gap: np.ndarray | None = None


@dataclass
class TrappedModeCandidate:
    index: int
    omega: float
    rel_gap: float
    localization: float
    truncation_gap: float | None


def build_mesh(c: CurvatureProfile, d: DepthProfile, L: float,
               m: int, n: int) -> StripMesh2D:
    """Uniform tensor mesh on [-L, L] x [0, delta] with p at Gauss points."""
    if L <= c.R:
        raise ValueError(f"truncation half-length L={L} must exceed the "
                         f"curvature support R={c.R}")
    if m < 8 or n < 8:
        raise ValueError("need at least 8 cells per direction")
    A = c.safety_margin(d.delta)
    if A >= 1.0:
        raise SelfIntersectionError(f"safety margin A = {A} >= 1")
    xi = np.linspace(-L, L, m + 1)
    eta = np.linspace(0.0, d.delta, n + 1)
    hx, hy = xi[1] - xi[0], eta[1] - eta[0]
    xg = xi[:-1, None] + 0.5 * hx * (1.0 + _G1[None, :])       # (m, 2)
    yg = eta[:-1, None] + 0.5 * hy * (1.0 + _G1[None, :])      # (n, 2)
    p = 1.0 + yg[None, None, :, :] * np.asarray(c.gamma(xg))[:, :, None, None]
    if np.any(p <= 0.0):
        raise SelfIntersectionError("metric factor p <= 0 at a Gauss point")
    return StripMesh2D(L=float(L), m=m, n=n, delta=d.delta,
                       xi_nodes=xi, eta_nodes=eta, p_samples=p, curvature=c)


def _local_matrices(mesh: StripMesh2D, d: DepthProfile):
    """Per-cell 4x4 element matrices for the three forms, vectorized over
    all (m, n) cells.  Local node order: (xi-left/right) x (eta-bottom/top),
    index a = 2*jx + jy."""
    hx, hy = mesh.hx, mesh.hy
    # 1-d shape values / derivatives at the two Gauss points
    s = np.stack([0.5 * (1.0 - _G1), 0.5 * (1.0 + _G1)])       # (2 nodes, 2 pts)
    ds = np.array([[-0.5, -0.5], [0.5, 0.5]]) * (2.0 / hx)     # d/dxi
    dt = np.array([[-0.5, -0.5], [0.5, 0.5]]) * (2.0 / hy)     # d/deta

    yg = mesh.eta_nodes[:-1, None] + 0.5 * hy * (1.0 + _G1[None, :])  # (n, 2)
    w_h = np.asarray(d.weight(yg))                              # e^{-beta}
    w_b = np.asarray(d.drift_weight(yg))                        # beta' e^{-beta}
    p = mesh.p_samples                                          # (m, 2, n, 2)
    jac = 0.25 * hx * hy                                        # gauss wt * |J|

    def tensor(wxi, weta, fx_a, fy_a, fx_b, fy_b):
        """sum over gauss pts of wxi(m,2)*weta(n,2)*fx_a fx_b (2pts) x fy_a fy_b."""
        ax = np.einsum("mi,ai,bi->mab", wxi, fx_a, fx_b)
        ay = np.einsum("nj,cj,dj->ncd", weta, fy_a, fy_b)
        return jac * np.einsum("mab,ncd->mnacbd", ax, ay)

    ones_x = np.ones((mesh.m, 2))
    # Lh: p^{-1} e^{-beta} dxi dxi + p e^{-beta} deta deta
    # p couples xi and eta gauss indices, so contract jointly
    w_full_inv = np.einsum("minj,nj->minj", 1.0 / p, w_h)       # (m,2,n,2)
    w_full = np.einsum("minj,nj->minj", p, w_h)

    def tensor_full(wfull, fx_a, fy_a, fx_b, fy_b):
        return jac * np.einsum("minj,ai,bi,cj,dj->mnacbd",
                               wfull, fx_a, fx_b, fy_a, fy_b)

    el_L = (tensor_full(w_full_inv, ds, s, ds, s)
            + tensor_full(w_full, s, dt, s, dt))
    # mass with the volume element p
    el_mass = tensor_full(w_full, s, s, s, s)
    # drift: C_ab = int beta' e^{-beta} (dxi N_b) N_a  (no p factor)
    el_C = tensor(ones_x, w_b, s, s, ds, s)
    # reorder (m, n, a_x, a_y, b_x, b_y) -> (m, n, 4, 4) with a = 2*ax + ay
    def fold(e):
        return e.reshape(mesh.m, mesh.n, 4, 4)
    return fold(el_L), fold(el_mass), fold(el_C)


def _dof_maps(mesh: StripMesh2D, cut_bc: str):
    """Global node numbering (full grid), the retained-dof map after the
    essential constraints, and per-dof coordinates."""
    m, n = mesh.m, mesh.n
    if cut_bc == "periodic":
        # identify xi = L with xi = -L: m distinct xi columns
        nxi = m
        base = np.arange(m * (n + 1)).reshape(m, n + 1)
        glob = np.vstack([base, base[:1]])
    else:
        nxi = m + 1
        glob = np.arange((m + 1) * (n + 1)).reshape(m + 1, n + 1)

    keep = np.ones((nxi, n + 1), dtype=bool)
    keep[:, 0] = False                      # Dirichlet at eta = 0
    if cut_bc == "dirichlet":
        keep[0, :] = False
        keep[-1, :] = False
    dof = np.full(nxi * (n + 1), -1, dtype=np.int64)
    flat_keep = keep.ravel()
    dof[flat_keep] = np.arange(int(flat_keep.sum()))

    xi_vals = mesh.xi_nodes[:nxi]
    node_xi = np.repeat(xi_vals, n + 1)[flat_keep]
    node_eta = np.tile(mesh.eta_nodes, nxi)[flat_keep]
    return glob, dof, node_xi, node_eta, int(flat_keep.sum())


def assemble_pencil_2d(mesh: StripMesh2D, d: DepthProfile,
                       cut_bc: str = "neumann") -> PencilForms2D:
    """Assemble the constrained sparse pencil forms."""
    if cut_bc not in CUT_TYPES:
        raise ValueError(f"cut_bc must be one of {CUT_TYPES}")
    el_L, el_mass, el_C = _local_matrices(mesh, d)
    glob, dof, node_xi, node_eta, ndof = _dof_maps(mesh, cut_bc)

    m, n = mesh.m, mesh.n
    # local node a = 2*ax + ay maps to grid node (jx + ax, jy + ay)
    jx, jy = np.meshgrid(np.arange(m), np.arange(n), indexing="ij")
    corners = np.stack([glob[jx + ax, jy + ay]
                        for ax in (0, 1) for ay in (0, 1)], axis=-1)  # (m,n,4)

    rows = np.repeat(corners[..., :, None], 4, axis=-1)
    cols = np.repeat(corners[..., None, :], 4, axis=-2)
    r = dof[rows.ravel()]
    cmask = dof[cols.ravel()]
    keep = (r >= 0) & (cmask >= 0)

    def build(el):
        data = el.ravel()[keep]
        return sp.coo_matrix((data, (r[keep], cmask[keep])),
                             shape=(ndof, ndof)).tocsr()

    Lh = build(el_L)
    mass = build(el_mass)
    C = build(el_C)
    Mh = (-0.5j) * (C - C.T)
    Lh = 0.5 * (Lh + Lh.T)      # kill round-off asymmetry
    mass = 0.5 * (mass + mass.T)
    return PencilForms2D(mesh=mesh, cut_bc=cut_bc, Lh=Lh, Mh=Mh.tocsr(),
                         mass=mass, node_xi=node_xi, node_eta=node_eta)


def _fix_phase(forms: PencilForms2D, v: np.ndarray) -> np.ndarray:
    nrm = np.real(np.vdot(v, forms.mass @ v))
    v = v / np.sqrt(nrm)
    i = int(np.argmax(np.abs(v)))
    phase = v[i] / abs(v[i])
    return v / phase


def _localization(forms: PencilForms2D, v: np.ndarray,
                  radius: float) -> float:
    """Weighted-norm fraction carried by nodes with |xi| <= radius."""
    ind = (np.abs(forms.node_xi) <= radius).astype(float)
    vr = v * ind
    num = np.real(np.vdot(vr, forms.mass @ vr))
    den = np.real(np.vdot(v, forms.mass @ v))
    return float(num / den)


def solve_top_spectrum(forms: PencilForms2D, k: int,
                       sigma: float | None = None,
                       which: str = "top",
                       loc_radius: float | None = None,
                       maxiter: int | None = None) -> SpectrumResult2D:
    """k extreme eigenvalues of Mh x = omega Lh x.

    Lh is the definite factor.  When sigma is given (a real shift strictly
    above/below the spectrum end), shift-invert accelerates convergence of
    the clustered band-edge eigenvalues.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    A = forms.Mh.astype(np.complex128)
    M = forms.Lh.astype(np.float64)
    if sigma is None:
        arp_which = "LA" if which == "top" else "SA"
    else:
        # shift-invert: take the eigenvalues nearest the shift, which the
        # caller places just beyond the relevant end of the spectrum
        arp_which = "LM"
    # fixed seeded start vector: deterministic across runs and processes,
    # and with no accidental symmetry that could hide odd modes
    v0 = np.random.default_rng(0).standard_normal(A.shape[0]) \
        .astype(np.complex128)
    try:
        vals, vecs = spla.eigsh(A, k=k, M=M, sigma=sigma, which=arp_which,
                                v0=v0, maxiter=maxiter)
    except spla.ArpackNoConvergence as exc:
        raise SolverError(
            f"2d pencil eigensolver did not converge: {exc}; "
            f"partial eigenvalues {getattr(exc, 'eigenvalues', None)}") from exc
    order = np.argsort(vals)[::-1]
    vals, vecs = np.real(vals[order]), vecs[:, order]

    mesh = forms.mesh
    if loc_radius is None:
        loc_radius = mesh.curvature.R + 2.0 * mesh.delta
    cols = []
    locs = []
    for j in range(k):
        v = _fix_phase(forms, vecs[:, j])
        cols.append(v)
        locs.append(_localization(forms, v, loc_radius))
    return SpectrumResult2D(eigenvalues=vals,
                            eigenvectors=np.stack(cols, axis=1),
                            forms=forms,
                            localization=np.array(locs),
                            localization_radius=loc_radius)


def detect_trapped_modes(result: SpectrumResult2D, band,
                         tol: DetectionTolerances = DetectionTolerances(),
                         ) -> list[TrappedModeCandidate]:
    """Ritz pairs above the band edge that are localized at the bend (and,
    when a second-L solve was attached, stable under truncation)."""
    omega_star = band.omega_star
    out = []
    for j, (w, loc) in enumerate(zip(result.eigenvalues,
                                     result.localization)):
        if w <= omega_star * (1.0 + tol.rel_gap):
            continue
        if loc < tol.loc_threshold:
            continue
        tgap = None
        if result.truncation_gap is not None:
            tgap = float(result.truncation_gap[j])
            if not np.isnan(tgap) and tgap > tol.trunc_rel:
                continue
        out.append(TrappedModeCandidate(
            index=j, omega=float(w),
            rel_gap=float((w - omega_star) / omega_star),
            localization=float(loc), truncation_gap=tgap))
    return out


def attach_truncation_gap(result: SpectrumResult2D,
                          result_2L: SpectrumResult2D) -> None:
    """Record |omega(L) - omega(2L)| / |omega(L)| per mode, pairing modes
    by rank."""
    k = min(result.eigenvalues.size, result_2L.eigenvalues.size)
    gap = np.full(result.eigenvalues.size, np.nan)
    w1 = result.eigenvalues[:k]
    w2 = result_2L.eigenvalues[:k]
    gap[:k] = np.abs(w1 - w2) / np.abs(w1)
    result.truncation_gap = gap


def bracketing_check(mesh: StripMesh2D, d: DepthProfile,
                     k: int = 1, sigma: float | None = None):
    """Top eigenvalue with Dirichlet cuts vs Neumann cuts on the same mesh;
    the Dirichlet value can never exceed the Neumann one (form-domain
    inclusion)."""
    w = {}
    for bc in ("dirichlet", "neumann"):
        forms = assemble_pencil_2d(mesh, d, cut_bc=bc)
        res = solve_top_spectrum(forms, k=k, sigma=sigma)
        w[bc] = float(res.eigenvalues[0])
    return w["dirichlet"], w["neumann"]


def field_on_grid(forms: PencilForms2D, v: np.ndarray) -> np.ndarray:
    """Scatter a constrained dof vector back onto the full (m+1, n+1) node
    grid, restoring the zeros at eta = 0 (and at the cuts for Dirichlet)
    and duplicating the wrap column for periodic cuts."""
    mesh = forms.mesh
    m, n = mesh.m, mesh.n
    _, dof, _, _, _ = _dof_maps(mesh, forms.cut_bc)
    nxi = m if forms.cut_bc == "periodic" else m + 1
    full = np.zeros(nxi * (n + 1), dtype=v.dtype)
    full[dof >= 0] = v[dof[dof >= 0]]
    full = full.reshape(nxi, n + 1)
    if forms.cut_bc == "periodic":
        full = np.vstack([full, full[:1]])
    return full


def embed_mesh(mesh: StripMesh2D, theta0: float = 0.0):
    """Physical coordinates of every mesh node.

    The coast curve is reconstructed from the curvature by
    theta(xi) = theta0 - int_0^xi gamma, X' = cos(theta), Y' = sin(theta),
    and the strip fibers follow the normal:
    x = X - eta Y', y = Y + eta X'.
    Returns (x, y) arrays of shape (m+1, n+1).
    """
    xi = mesh.xi_nodes
    gamma = mesh.curvature.gamma
    # high-order per-interval Gauss quadrature of the smooth integrands
    gl_x, gl_w = np.polynomial.legendre.leggauss(12)
    h = np.diff(xi)
    pts = xi[:-1, None] + 0.5 * h[:, None] * (1.0 + gl_x[None, :])
    i0 = int(np.argmin(np.abs(xi)))   # anchor the curve at xi closest to 0

    def anchored_cumsum(incr):
        cs = np.concatenate(([0.0], np.cumsum(incr)))
        return cs - cs[i0]

    theta = theta0 + anchored_cumsum(-0.5 * h * (np.asarray(gamma(pts)) @ gl_w))

    # theta at the interval Gauss points: start from the left node value and
    # re-integrate gamma over the partial segment
    theta_pts = np.empty_like(pts)
    for q in range(pts.shape[1]):
        seg = pts[:, q] - xi[:-1]
        loc = xi[:-1, None] + 0.5 * seg[:, None] * (1.0 + gl_x[None, :])
        theta_pts[:, q] = theta[:-1] - 0.5 * seg * (np.asarray(gamma(loc)) @ gl_w)

    X = anchored_cumsum(0.5 * h * (np.cos(theta_pts) @ gl_w))
    Y = anchored_cumsum(0.5 * h * (np.sin(theta_pts) @ gl_w))
    Xp, Yp = np.cos(theta), np.sin(theta)
    eta = mesh.eta_nodes
    x = X[:, None] - eta[None, :] * Yp[:, None]
    y = Y[:, None] + eta[None, :] * Xp[:, None]
    return x, y
