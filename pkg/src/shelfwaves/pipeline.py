"""End-to-end scenario pipeline: profiles -> band edge -> trapping report
-> optional 2D spectrum, plus the deterministic report/CSV writers.

All floats in the outputs are rendered with 17 significant digits so that a
rerun on the same platform reproduces the report byte for byte (timing
fields are segregated under a single "timings" key for that reason).
"""

from __future__ import annotations

import csv
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .band import (DispersionCurve, EssentialBand, SearchParams,
                   dispersion_curve, find_omega_star)
from .config import ScenarioConfig
from .profiles import (CurvatureProfile, DepthProfile, make_curvature_profile,
                       make_depth_profile)
from .strip2d import (SpectrumResult2D, assemble_pencil_2d,
                      attach_truncation_gap, build_mesh, detect_trapped_modes,
                      embed_mesh, field_on_grid, solve_top_spectrum)
from .trapping import TrappingReport, evaluate_criterion
from .transversal import TransversalGrid

SCHEMA_VERSION = 1


@dataclass
class RunResult:
    config: ScenarioConfig
    depth: DepthProfile
    curvature: CurvatureProfile
    band: EssentialBand
    curve: DispersionCurve
    trapping: TrappingReport
    spectrum: SpectrumResult2D | None
    candidates: list
    timings: dict = field(default_factory=dict)

    def report(self) -> dict:
        """JSON-ready report dictionary (deterministic apart from timings)."""
        band = self.band
        rep = {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.echo(),
            "band": {
                "omega_star": band.omega_star,
                "alpha_crit": band.alpha_crit,
                "lambda_star": band.lambda_star,
                "interval": list(band.band),
                "diagnostics": band.diagnostics,
            },
            "trapping": self.trapping.to_dict(),
            "timings": self.timings,
        }
        if self.spectrum is not None:
            res = self.spectrum
            rep["strip2d"] = {
                "cut_bc": res.forms.cut_bc,
                "dim": res.forms.dim,
                "eigenvalues": res.eigenvalues.tolist(),
                "localization": res.localization.tolist(),
                "localization_radius": res.localization_radius,
                "truncation_gap": (None if res.truncation_gap is None
                                   else res.truncation_gap.tolist()),
            }
            rep["candidates"] = [
                {"index": c.index, "omega": c.omega, "rel_gap": c.rel_gap,
                 "localization": c.localization,
                 "truncation_gap": c.truncation_gap}
                for c in self.candidates
            ]
        return rep


def run_scenario(cfg: ScenarioConfig, verbose: bool = False,
                 log=print) -> RunResult:
    """Run the full pipeline for one scenario configuration."""
    timings = {}
    t0 = time.perf_counter()

    d = make_depth_profile(cfg.depth_family, cfg.depth_params, cfg.delta)
    c = make_curvature_profile(cfg.curvature_family, cfg.curvature_params,
                               cfg.R)
    grid = TransversalGrid(n=cfg.transversal_n, delta=cfg.delta)
    if cfg.alpha_lo is not None and cfg.alpha_hi is not None:
        search = SearchParams(alpha_lo=cfg.alpha_lo, alpha_hi=cfg.alpha_hi,
                              coarse_n=cfg.coarse_n, tol=cfg.tol)
    else:
        base = SearchParams.default(cfg.delta)
        search = SearchParams(alpha_lo=base.alpha_lo, alpha_hi=base.alpha_hi,
                              coarse_n=cfg.coarse_n, tol=cfg.tol)

    band = find_omega_star(d, grid, search)
    timings["band"] = time.perf_counter() - t0
    if verbose:
        log(f"band edge: Omega* = {band.omega_star:.12g} at "
            f"alpha = {band.alpha_crit:.12g}")

    t1 = time.perf_counter()
    alphas = np.geomspace(search.alpha_lo, search.alpha_hi,
                          max(search.coarse_n, 48))
    curve = dispersion_curve(d, grid, alphas)
    timings["dispersion"] = time.perf_counter() - t1

    t2 = time.perf_counter()
    trapping = evaluate_criterion(band, d, c)
    timings["trapping"] = time.perf_counter() - t2
    if verbose:
        log(f"trapping: C_beta = {trapping.C_beta:.12g}, "
            f"integral verdict = {trapping.verdict_integral}, "
            f"pointwise verdict = {trapping.verdict_pointwise}")

    spectrum = None
    candidates = []
    if cfg.strip_L is not None:
        t3 = time.perf_counter()
        mesh = build_mesh(c, d, cfg.strip_L, cfg.strip_m, cfg.strip_n)
        forms = assemble_pencil_2d(mesh, d, cut_bc=cfg.cut_bc)
        spectrum = solve_top_spectrum(forms, k=cfg.k,
                                      sigma=1.5 * band.omega_star)
        if cfg.stability_solve:
            mesh2 = build_mesh(c, d, 2.0 * cfg.strip_L, 2 * cfg.strip_m,
                               cfg.strip_n)
            forms2 = assemble_pencil_2d(mesh2, d, cut_bc=cfg.cut_bc)
            spectrum2 = solve_top_spectrum(forms2, k=cfg.k,
                                           sigma=1.5 * band.omega_star)
            attach_truncation_gap(spectrum, spectrum2)
        candidates = detect_trapped_modes(spectrum, band)
        timings["strip2d"] = time.perf_counter() - t3
        if verbose:
            log(f"strip2d: top eigenvalue {spectrum.eigenvalues[0]:.12g}, "
                f"{len(candidates)} trapped-mode candidate(s)")

    timings["total"] = time.perf_counter() - t0
    return RunResult(config=cfg, depth=d, curvature=c, band=band, curve=curve,
                     trapping=trapping, spectrum=spectrum,
                     candidates=candidates, timings=timings)


# ---------------------------------------------------------------------------
# deterministic serialization

def _fmt(x: float) -> str:
    if x != x:
        return "NaN"
    if x in (float("inf"), float("-inf")):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return f"{x:.17g}"


def dump_json(obj, indent: int = 0) -> str:
    """Recursive JSON writer with sorted keys and 17-significant-digit
    floats, so equal inputs yield byte-identical files."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = [dump_json(v, indent + 1) for v in obj]
        if not items:
            return "[]"
        return "[\n" + ",\n".join(inner + it for it in items) + f"\n{pad}]"
    if isinstance(obj, dict):
        items = [f'{inner}"{k}": {dump_json(obj[k], indent + 1)}'
                 for k in sorted(obj, key=str)]
        if not items:
            return "{}"
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def write_report(result: RunResult, out_dir, verbose: bool = False,
                 log=print) -> list:
    """Write report.json, dispersion.csv and one mode_<j>.csv per trapped-
    mode candidate.  Returns the list of paths written."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    path = os.path.join(out_dir, "report.json")
    with open(path, "w") as fh:
        fh.write(dump_json(result.report()) + "\n")
    written.append(path)

    if "csv" in result.config.formats:
        path = os.path.join(out_dir, "dispersion.csv")
        result.curve.write_csv(path)
        written.append(path)
        # export every detected candidate; with none detected but a 2D
        # solve available, export the top Ritz mode for inspection
        indices = [c.index for c in result.candidates]
        if not indices and result.spectrum is not None:
            indices = [0]
        for j in indices:
            path = os.path.join(out_dir, f"mode_{j}.csv")
            _write_mode_csv(path, result, j)
            written.append(path)
    if verbose:
        for p in written:
            log(f"wrote {p}")
    return written


def _write_mode_csv(path, result: RunResult, index: int) -> None:
    """Nodal mode table: strip coordinates, embedded physical coordinates,
    and the complex field value."""
    res = result.spectrum
    v = field_on_grid(res.forms, res.eigenvectors[:, index])
    mesh = res.forms.mesh
    x, y = embed_mesh(mesh)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["xi", "eta", "x", "y", "re", "im", "abs"])
        for i, xi in enumerate(mesh.xi_nodes):
            for j, eta in enumerate(mesh.eta_nodes):
                z = v[i, j]
                wr.writerow([f"{xi:.17g}", f"{eta:.17g}",
                             f"{x[i, j]:.17g}", f"{y[i, j]:.17g}",
                             f"{z.real:.17g}", f"{z.imag:.17g}",
                             f"{abs(z):.17g}"])


SWEEP_COLUMNS = ["value", "status", "omega_star", "alpha_crit", "C_beta",
                 "margin", "verdict_integral", "verdict_pointwise",
                 "omega_top", "n_candidates", "error"]


def sweep_row(cfg: ScenarioConfig, param: str, value: float) -> dict:
    """One sweep evaluation; failures are reported in the row, not raised."""
    from .config import apply_sweep_value
    import copy

    cfg = copy.deepcopy(cfg)
    row = dict.fromkeys(SWEEP_COLUMNS, "")
    row["value"] = value
    try:
        apply_sweep_value(cfg, param, value)
        result = run_scenario(cfg)
    except Exception as exc:  # per-row isolation by design
        row["status"] = "error"
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    row["status"] = "ok"
    row["omega_star"] = result.band.omega_star
    row["alpha_crit"] = result.band.alpha_crit
    row["C_beta"] = result.trapping.C_beta
    row["margin"] = result.trapping.margin
    row["verdict_integral"] = result.trapping.verdict_integral
    row["verdict_pointwise"] = result.trapping.verdict_pointwise
    if result.spectrum is not None:
        row["omega_top"] = float(result.spectrum.eigenvalues[0])
        row["n_candidates"] = len(result.candidates)
    return row


def write_sweep_csv(path, rows) -> None:
    def cell(v):
        if isinstance(v, bool) or v is None:
            return str(v)
        if isinstance(v, float):
            return f"{v:.17g}"
        return str(v)

    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(SWEEP_COLUMNS)
        for row in rows:
            wr.writerow([cell(row[k]) for k in SWEEP_COLUMNS])
