"""Scenario configuration: an INI-style text file with one section per
pipeline stage and key = value scalars.

    [depth]        family, params (comma list), delta
    [curvature]    family, params (comma list), R
    [transversal]  n
    [search]       alpha_lo, alpha_hi, coarse_n, tol        (all optional)
    [strip2d]      L, m, n, cut_bc, k, stability_solve      (section optional)
    [outputs]      dir, formats                             (optional)

Sweep parameter paths address scalars as "section.key" or, for the comma
lists, "section.key[i]".
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, asdict

from .errors import ShelfwavesError


class ConfigError(ShelfwavesError):
    pass


@dataclass
class ScenarioConfig:
    depth_family: str
    depth_params: list
    delta: float
    curvature_family: str
    curvature_params: list
    R: float
    transversal_n: int = 256
    alpha_lo: float | None = None
    alpha_hi: float | None = None
    coarse_n: int = 48
    tol: float = 1e-8
    strip_L: float | None = None
    strip_m: int = 256
    strip_n: int = 64
    cut_bc: str = "neumann"
    k: int = 4
    stability_solve: bool = False
    out_dir: str = "out"
    formats: list = field(default_factory=lambda: ["json", "csv"])

    def echo(self) -> dict:
        return asdict(self)


def _floats(s: str) -> list:
    s = s.strip()
    if not s:
        return []
    return [float(tok) for tok in s.split(",")]


def parse_config(path) -> ScenarioConfig:
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    try:
        depth = cp["depth"]
        curv = cp["curvature"]
        cfg = ScenarioConfig(
            depth_family=depth.get("family"),
            depth_params=_floats(depth.get("params", "")),
            delta=depth.getfloat("delta"),
            curvature_family=curv.get("family"),
            curvature_params=_floats(curv.get("params", "")),
            R=curv.getfloat("R"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid [depth]/[curvature] sections: {exc}") from exc
    if cp.has_section("transversal"):
        cfg.transversal_n = cp["transversal"].getint("n", cfg.transversal_n)
    if cp.has_section("search"):
        s = cp["search"]
        cfg.alpha_lo = s.getfloat("alpha_lo", fallback=None)
        cfg.alpha_hi = s.getfloat("alpha_hi", fallback=None)
        cfg.coarse_n = s.getint("coarse_n", cfg.coarse_n)
        cfg.tol = s.getfloat("tol", cfg.tol)
    if cp.has_section("strip2d"):
        s = cp["strip2d"]
        cfg.strip_L = s.getfloat("L", fallback=None)
        cfg.strip_m = s.getint("m", cfg.strip_m)
        cfg.strip_n = s.getint("n", cfg.strip_n)
        cfg.cut_bc = s.get("cut_bc", cfg.cut_bc)
        cfg.k = s.getint("k", cfg.k)
        cfg.stability_solve = s.getboolean("stability_solve", cfg.stability_solve)
    if cp.has_section("outputs"):
        s = cp["outputs"]
        cfg.out_dir = s.get("dir", cfg.out_dir)
        cfg.formats = [t.strip() for t in s.get("formats", "json,csv").split(",")]
    return cfg


def config_from_echo(echo: dict) -> ScenarioConfig:
    """Rebuild a config from the dictionary written into a report."""
    return ScenarioConfig(**echo)


def apply_sweep_value(cfg: ScenarioConfig, path: str, value: float) -> None:
    """Set the scalar addressed by "section.key" or "section.key[i]"."""
    attr_map = {
        "depth.delta": "delta",
        "curvature.R": "R",
        "transversal.n": "transversal_n",
        "search.alpha_lo": "alpha_lo",
        "search.alpha_hi": "alpha_hi",
        "search.coarse_n": "coarse_n",
        "search.tol": "tol",
        "strip2d.L": "strip_L",
        "strip2d.m": "strip_m",
        "strip2d.n": "strip_n",
        "strip2d.k": "k",
    }
    if "[" in path:
        base, idx = path[:-1].split("[")
        i = int(idx)
        list_map = {"depth.params": "depth_params",
                    "curvature.params": "curvature_params"}
        if base not in list_map:
            raise ConfigError(f"not a sweepable list parameter: {base}")
        lst = getattr(cfg, list_map[base])
        if not 0 <= i < len(lst):
            raise ConfigError(f"index {i} out of range for {base}")
        lst[i] = float(value)
        return
    if path not in attr_map:
        raise ConfigError(f"not a sweepable scalar parameter: {path}")
    name = attr_map[path]
    current = getattr(cfg, name)
    setattr(cfg, name, type(current)(value) if current is not None else float(value))
