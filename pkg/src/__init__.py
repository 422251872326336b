"""
Cavity-array photon transport

Single-photon scattering through a one-dimensional coupled-cavity array whose
central N cavities each hold a V-type three-level atom: closed-form
amplitudes, brute-force cross-checks and band-structure measurements.
"""

__version__ = "1.0.0"
__description__ = "Photon transport through atom-doped coupled-cavity arrays"

from .physics.model import ModelParams, Regime, classify
from .physics.scattering import transmission_amplitude, scatter_many
from .analysis.spectrum import Spectrum, sweep
from .analysis.bands import BandReport, find_band_edges
from .utils.config_manager import ConfigManager
from .utils.progress_tracker import ProgressTracker
from .utils.logging_setup import setup_logging

__all__ = [
    'ModelParams',
    'Regime',
    'classify',
    'transmission_amplitude',
    'scatter_many',
    'Spectrum',
    'sweep',
    'BandReport',
    'find_band_edges',
    'ConfigManager',
    'ProgressTracker',
    'setup_logging'
]
