"""
Model definition, closed-form scattering amplitudes and brute-force solvers.
"""

from .model import ModelParams, EnergyPoint, Regime, classify, classify_many
from .scattering import ScatteringAmplitudes, transmission_amplitude, scatter_many, chebyshev_u
from .oracle import solve_full_system, solve_reduced_system, solve_transfer_matrix

__all__ = [
    'ModelParams',
    'EnergyPoint',
    'Regime',
    'classify',
    'classify_many',
    'ScatteringAmplitudes',
    'transmission_amplitude',
    'scatter_many',
    'chebyshev_u',
    'solve_full_system',
    'solve_reduced_system',
    'solve_transfer_matrix'
]
