"""
Shared fixtures: wide-band parameter sets in units of gamma and a seeded generator.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.physics.model import ModelParams  # noqa: E402


@pytest.fixture
def wide_band():
    """gamma = 1, v = 10, w = w0 = 0, degenerate levels, one cell."""
    return ModelParams.from_gamma_units(v_over_gamma=10.0, n_cells=1)


@pytest.fixture
def mirror():
    """Seven degenerate cells: the quantum-mirror configuration."""
    return ModelParams.from_gamma_units(v_over_gamma=10.0, n_cells=7)


@pytest.fixture
def split_levels():
    """Excited levels split by +-0.5 gamma, three cells."""
    return ModelParams.from_gamma_units(v_over_gamma=10.0, delta_omega=0.5, n_cells=3)


@pytest.fixture
def unit_coupling():
    """g = v = 1 with w = w0 = 0; the hand-checkable raw-unit case."""
    return ModelParams(omega_c=0.0, v=1.0, g=1.0, omega0=0.0, delta_omega=0.0, n_cells=3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
