"""
Shared fixtures: a carrier, small front ends and seeded generators.
"""

import numpy as np
import pytest

from src.physics.geometry import CarrierConfig
from src.synthesis.frontend import FrontEnd, FrontendLayout

WAVELENGTH = 0.01


@pytest.fixture
def carrier() -> CarrierConfig:
    return CarrierConfig(wavelength=WAVELENGTH)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def small_layout(carrier) -> FrontendLayout:
    """3x3 aperture, 2 RF chains, 2 SIM layers, short optimizer budgets."""
    return FrontendLayout.in_wavelengths(
        carrier,
        rows=3,
        cols=3,
        rf_chains=2,
        sim_layers=2,
        budget=80,
        restarts=2,
    )


@pytest.fixture
def small_frontend(small_layout) -> FrontEnd:
    return FrontEnd(small_layout)
