import numpy as np
import pytest

from shelfwaves import (TransversalGrid, find_omega_star, make_curvature_profile,
                        make_depth_profile)


@pytest.fixture(scope="session")
def ref_depth():
    """Logarithmic shelf beta = ln(1 + eta) on (0, 1)."""
    return make_depth_profile("log", [1.0], 1.0)


@pytest.fixture(scope="session")
def ref_bump():
    """Small smooth bump, amplitude 0.1, support [-2, 2]."""
    return make_curvature_profile("bump", [0.1], 2.0)


@pytest.fixture(scope="session")
def band_at(ref_depth):
    """Band-edge computation for the reference depth, cached per grid size."""
    cache = {}

    def get(n):
        if n not in cache:
            grid = TransversalGrid(n=n, delta=ref_depth.delta)
            cache[n] = find_omega_star(ref_depth, grid)
        return cache[n]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
