"""Shared fixtures: seeded generators and prebuilt geometry data."""

import numpy as np
import pytest

from twistsm.spectral import FiniteDiracParams, build_spectral_data

SEED = 20260819

CURVED_VIERBEIN = np.array([
    [1.0, 0.2, 0.0, 0.0],
    [0.0, 1.1, 0.3, 0.0],
    [0.0, 0.0, 0.9, 0.1],
    [0.2, 0.0, 0.0, 1.2],
])


@pytest.fixture()
def rng():
    """Fresh deterministic generator per test."""
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def data():
    """Geometry at a point with the default couplings and the flat frame."""
    return build_spectral_data()


@pytest.fixture(scope="session")
def curved_data():
    """Geometry with a non-trivial (non-orthonormal) frame."""
    return build_spectral_data(FiniteDiracParams(), CURVED_VIERBEIN)
