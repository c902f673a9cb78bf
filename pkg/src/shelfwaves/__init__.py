"""Spectral toolkit for shelf-wave operator pencils on straight and curved
coastal strips: transversal dispersion curves, essential-spectrum band
edges, trapping criteria and discrete trapped-mode computation."""

from .band import (DispersionCurve, EssentialBand, SearchParams,
                   dispersion_curve, find_omega_star, verify_mode_ode)
from .config import ScenarioConfig, parse_config
from .errors import (BoundaryHitError, DegenerateDriftError,
                     HypothesisViolationError, ProfileError,
                     SelfIntersectionError, ShelfwavesError, SolverError)
from .pipeline import RunResult, run_scenario, write_report
from .profiles import (CurvatureProfile, DepthProfile, curvature_moments,
                       make_curvature_profile, make_depth_profile,
                       validate_theorem_hypotheses)
from .strip2d import (DetectionTolerances, PencilForms2D, SpectrumResult2D,
                      StripMesh2D, TrappedModeCandidate, assemble_pencil_2d,
                      attach_truncation_gap, bracketing_check, build_mesh,
                      detect_trapped_modes, embed_mesh, field_on_grid,
                      solve_top_spectrum)
from .trapping import (TrappingReport, chebyshev_defect, compute_C_beta,
                       compute_D_gamma_exact, compute_I1, compute_I1_by_parts,
                       compute_I2, evaluate_criterion)
from .transversal import (TransversalForms, TransversalGrid, TransversalMode,
                          assemble_transversal_forms, dispersion_upper_bound,
                          j_functionals, optimal_alpha, rayleigh_quotient,
                          solve_transversal, solve_transversal_symbol)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
