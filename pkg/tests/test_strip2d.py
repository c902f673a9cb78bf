import numpy as np
import pytest

from shelfwaves import (DetectionTolerances, SelfIntersectionError,
                        SpectrumResult2D, assemble_pencil_2d,
                        attach_truncation_gap, bracketing_check, build_mesh,
                        detect_trapped_modes, embed_mesh, field_on_grid,
                        make_curvature_profile, solve_top_spectrum)


@pytest.fixture(scope="module")
def zero_curv():
    return make_curvature_profile("zero", [], 2.0)


@pytest.fixture(scope="module")
def small_mesh(zero_curv, ref_depth):
    return build_mesh(zero_curv, ref_depth, L=4.0, m=32, n=16)


@pytest.fixture(scope="module")
def curved_mesh(ref_bump, ref_depth):
    return build_mesh(ref_bump, ref_depth, L=6.0, m=96, n=24)


def test_build_mesh_validation(zero_curv, ref_depth):
    with pytest.raises(ValueError):
        build_mesh(zero_curv, ref_depth, L=1.0, m=32, n=16)  # L <= R
    with pytest.raises(ValueError):
        build_mesh(zero_curv, ref_depth, L=4.0, m=4, n=16)
    fat = make_curvature_profile("bump", [1.5], 2.0)
    with pytest.raises(SelfIntersectionError):
        build_mesh(fat, ref_depth, L=4.0, m=32, n=16)


def test_form_structure(small_mesh, ref_depth):
    forms = assemble_pencil_2d(small_mesh, ref_depth, cut_bc="neumann")
    Lh, Mh, mass = forms.Lh.toarray(), forms.Mh.toarray(), forms.mass.toarray()
    assert np.allclose(Lh, Lh.T)
    assert np.allclose(mass, mass.T)
    assert np.allclose(Mh, Mh.conj().T)
    assert np.allclose(Mh.real, 0.0)             # i * (real skew-symmetric)
    assert np.min(np.linalg.eigvalsh(Lh)) > 0.0
    assert np.min(np.linalg.eigvalsh(mass)) > 0.0
    # Neumann retains all nodes except eta = 0
    assert forms.dim == (small_mesh.m + 1) * small_mesh.n


def test_dof_counts_by_cut(small_mesh, ref_depth):
    m, n = small_mesh.m, small_mesh.n
    dims = {bc: assemble_pencil_2d(small_mesh, ref_depth, cut_bc=bc).dim
            for bc in ("dirichlet", "neumann", "periodic")}
    assert dims["neumann"] == (m + 1) * n
    assert dims["dirichlet"] == (m - 1) * n
    assert dims["periodic"] == m * n


def test_field_on_grid_roundtrip(small_mesh, ref_depth):
    for bc in ("dirichlet", "neumann", "periodic"):
        forms = assemble_pencil_2d(small_mesh, ref_depth, cut_bc=bc)
        v = np.arange(1, forms.dim + 1, dtype=complex)
        grid = field_on_grid(forms, v)
        assert grid.shape == (small_mesh.m + 1, small_mesh.n + 1)
        assert np.all(grid[:, 0] == 0.0)                 # eta = 0 constrained
        if bc == "dirichlet":
            assert np.all(grid[0] == 0.0) and np.all(grid[-1] == 0.0)
        if bc == "periodic":
            assert np.array_equal(grid[0], grid[-1])
        # every dof value appears exactly where its coordinates say
        assert np.count_nonzero(grid) >= forms.dim


def test_spectrum_antisymmetric(small_mesh, ref_depth):
    forms = assemble_pencil_2d(small_mesh, ref_depth, cut_bc="neumann")
    top = solve_top_spectrum(forms, k=4, which="top")
    bottom = solve_top_spectrum(forms, k=4, which="bottom")
    assert np.allclose(np.sort(top.eigenvalues),
                       np.sort(-bottom.eigenvalues), atol=1e-10)


def test_eigenvector_normalization_and_localization(small_mesh, ref_depth):
    forms = assemble_pencil_2d(small_mesh, ref_depth, cut_bc="neumann")
    res = solve_top_spectrum(forms, k=2, loc_radius=10.0)
    v = res.eigenvectors[:, 0]
    assert np.real(np.vdot(v, forms.mass @ v)) == pytest.approx(1.0, rel=1e-10)
    # radius beyond the cut captures the full weighted norm
    assert np.allclose(res.localization, 1.0, atol=1e-12)


def test_bracketing_dirichlet_below_neumann(curved_mesh, ref_depth, band_at):
    sigma = 1.5 * band_at(1024).omega_star
    w_d, w_n = bracketing_check(curved_mesh, ref_depth, sigma=sigma)
    assert w_d <= w_n + 1e-12


def test_detection_filters():
    class Band:
        omega_star = 0.1

    eig = np.array([0.11, 0.1005, 0.12])
    loc = np.array([0.95, 0.99, 0.2])
    res = SpectrumResult2D(eigenvalues=eig, eigenvectors=np.eye(3),
                           forms=None, localization=loc,
                           localization_radius=4.0)
    cands = detect_trapped_modes(res, Band(),
                                 DetectionTolerances(rel_gap=1e-2))
    # index 0 passes; index 1 is inside the band margin; index 2 delocalized
    assert [c.index for c in cands] == [0]
    assert cands[0].rel_gap == pytest.approx(0.1)


def test_truncation_gap_attachment():
    res = SpectrumResult2D(eigenvalues=np.array([0.2, 0.1]),
                           eigenvectors=np.eye(2), forms=None,
                           localization=np.ones(2), localization_radius=4.0)
    res2 = SpectrumResult2D(eigenvalues=np.array([0.21]),
                            eigenvectors=np.eye(1), forms=None,
                            localization=np.ones(1), localization_radius=4.0)
    attach_truncation_gap(res, res2)
    assert res.truncation_gap[0] == pytest.approx(0.05)
    assert np.isnan(res.truncation_gap[1])


def test_embed_straight_strip_is_identity(small_mesh):
    x, y = embed_mesh(small_mesh)
    xi, eta = np.meshgrid(small_mesh.xi_nodes, small_mesh.eta_nodes,
                          indexing="ij")
    assert np.allclose(x, xi, atol=1e-12)
    assert np.allclose(y, eta, atol=1e-12)


def test_embed_curved_coast_unit_speed(curved_mesh):
    x, y = embed_mesh(curved_mesh)
    ds = np.hypot(np.diff(x[:, 0]), np.diff(y[:, 0]))
    # the coast curve is arc-length parametrized by xi; the nodal chord is
    # shorter than the arc by O(kappa^2 hx^2 / 24)
    hx = curved_mesh.hx
    assert np.all(ds <= hx + 1e-12)
    assert np.all(ds >= hx * (1.0 - 1e-5))
