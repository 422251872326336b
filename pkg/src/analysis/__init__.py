"""
Spectra over detuning grids, band-structure measurements and the randomized selftest.
"""

from .spectrum import Spectrum, sweep, uniform_grid
from .bands import BandReport, Feature, HalfMaximum, find_band_edges, half_maximum_crossings, measure_halfwidth, gap_attenuation

__all__ = [
    'Spectrum',
    'sweep',
    'uniform_grid',
    'BandReport',
    'Feature',
    'find_band_edges',
    'HalfMaximum',
    'half_maximum_crossings',
    'measure_halfwidth',
    'gap_attenuation'
]
