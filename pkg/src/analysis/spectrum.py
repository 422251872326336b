"""
Transmission/reflection spectra over detuning grids.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence
from concurrent.futures import ThreadPoolExecutor, as_completed

import numpy as np

from ..errors import InvalidParameterError
from ..physics.model import REGIME_CODES, ModelParams, Regime
from ..physics.scattering import ScatteringAmplitudes, scatter_many

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 4096


@dataclass
class Spectrum:
    """Amplitudes on an ordered grid of detunings E - w0 (in ``energy_unit``)."""
    params: ModelParams
    grid: np.ndarray
    points: List[ScatteringAmplitudes]
    metadata: Dict[str, object] = field(default_factory=dict)

    @property
    def energy_unit(self) -> float:
        return float(self.metadata.get('energy_unit', 1.0))

    def energies(self) -> np.ndarray:
        return self.params.omega0 + self.energy_unit * self.grid

    def transmission(self) -> np.ndarray:
        return np.array([p.big_t for p in self.points])

    def reflection(self) -> np.ndarray:
        return np.array([p.big_r for p in self.points])

    def regimes(self) -> List[Regime]:
        return [p.regime for p in self.points]

    def max_unitarity_defect(self) -> float:
        defects = [p.unitarity_defect for p in self.points if p.regime.is_scattering]
        return max(defects) if defects else 0.0

    def count(self, regime: Regime) -> int:
        return sum(1 for p in self.points if p.regime is regime)


def validate_grid(grid: Sequence[float]) -> np.ndarray:
    values = np.asarray(grid, dtype=float)
    if values.ndim != 1 or values.size < 1:
        raise InvalidParameterError("grid must be a non-empty one-dimensional sequence", "grid")
    if not np.all(np.isfinite(values)):
        raise InvalidParameterError("grid contains non-finite values", "grid")
    if values.size > 1 and not np.all(np.diff(values) > 0):
        raise InvalidParameterError("grid must be strictly increasing", "grid")
    return values


def uniform_grid(minimum: float, maximum: float, count: int) -> np.ndarray:
    if count < 2:
        raise InvalidParameterError(f"grid count must be >= 2, got {count}", "grid.count")
    if not minimum < maximum:
        raise InvalidParameterError(f"grid min {minimum} must be below max {maximum}", "grid")
    return np.linspace(minimum, maximum, count)


def sweep(params: ModelParams, grid: Sequence[float], energy_unit: Optional[float] = None,
          max_workers: int = 1, chunk_size: int = DEFAULT_CHUNK_SIZE) -> Spectrum:
    """
    Evaluate the analytic amplitudes at every grid detuning.

    Grid values are detunings E - w0 in ``energy_unit`` (default: the model's
    gamma, or 1 when gamma vanishes). Chunks of the grid are evaluated in a
    thread pool and reassembled in grid order. Pole entries carry T=0, R=1;
    entries outside the lead band carry NaN and a LeadBandEdge tag.
    """
    values = validate_grid(grid)
    if energy_unit is None:
        energy_unit = params.gamma() or 1.0
    energies = params.omega0 + energy_unit * values

    r = np.empty(values.shape, dtype=complex)
    t = np.empty(values.shape, dtype=complex)
    codes = np.empty(values.shape, dtype=np.int8)
    bounds = list(range(0, values.size, max(1, chunk_size)))

    if max_workers <= 1 or len(bounds) == 1:
        result = scatter_many(energies, params)
        r[:], t[:], codes[:] = result.r, result.t, result.codes
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            future_to_start = {
                executor.submit(scatter_many, energies[start:start + chunk_size], params): start
                for start in bounds
            }
            for future in as_completed(future_to_start):
                start = future_to_start[future]
                result = future.result()
                stop = start + result.energies.size
                r[start:stop], t[start:stop], codes[start:stop] = result.r, result.t, result.codes

    points = [
        ScatteringAmplitudes(r=complex(r[i]), t=complex(t[i]), big_r=abs(r[i]) ** 2, big_t=abs(t[i]) ** 2,
                             regime=REGIME_CODES[codes[i]])
        for i in range(values.size)
    ]
    gamma_value = params.gamma()
    metadata = {
        'energy_unit': float(energy_unit),
        'gamma': gamma_value,
        'v_over_gamma': params.v / gamma_value if gamma_value > 0 else None,
        'n_cells': int(params.n_cells),
        'count': int(values.size),
        'pole_points': int(np.sum(codes == 3)),
        'outside_lead_band': int(np.sum(codes == 2)),
    }
    logger.debug(f"Sweep over {values.size} points for N={params.n_cells} done")
    return Spectrum(params=params, grid=values, points=points, metadata=metadata)
