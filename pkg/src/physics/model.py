"""
Model parameters and scalar derived quantities for a coupled-cavity array
with N embedded V-type three-level atoms.

Energies are stored in raw model units. The conversion helpers express them
in units of gamma = g^2 / 2v, which is how spectra are reported.
"""

import math
import logging
from enum import Enum
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ..errors import AtomPoleError, InvalidParameterError, LeadBandEdgeError

logger = logging.getLogger(__name__)

# Relative distance to an atomic level below which an energy counts as the pole.
POLE_TOLERANCE = 1e-12


class Regime(str, Enum):
    """Scattering regime of a photon energy."""
    PROPAGATING = "Propagating"
    EVANESCENT = "Evanescent"
    LEAD_BAND_EDGE = "LeadBandEdge"
    ATOM_POLE = "AtomPole"

    @property
    def is_scattering(self) -> bool:
        return self in (Regime.PROPAGATING, Regime.EVANESCENT)


@dataclass(frozen=True)
class ModelParams:
    """
    Physical parameters of the doped cavity array.

    Attributes:
        omega_c: cavity mode frequency
        v: inter-cavity hopping (> 0)
        g: atom-field coupling, shared by both transitions (>= 0)
        omega0: centre of the two excited atomic levels
        delta_omega: half-splitting of the excited levels (>= 0)
        n_cells: number of atom-doped cavities (>= 1)
    """
    omega_c: float
    v: float
    g: float
    omega0: float
    delta_omega: float
    n_cells: int

    def __post_init__(self):
        for name in ("omega_c", "v", "g", "omega0", "delta_omega"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be a finite number, got {value!r}", name)
        if self.v <= 0:
            raise InvalidParameterError(f"v must be > 0, got {self.v}", "v")
        if self.g < 0:
            raise InvalidParameterError(f"g must be >= 0, got {self.g}", "g")
        if self.delta_omega < 0:
            raise InvalidParameterError(f"delta_omega must be >= 0, got {self.delta_omega}", "delta_omega")
        if isinstance(self.n_cells, bool) or not isinstance(self.n_cells, (int, np.integer)) or self.n_cells < 1:
            raise InvalidParameterError(f"n_cells must be an integer >= 1, got {self.n_cells!r}", "n_cells")
        if not math.isfinite(self.gamma()):
            raise InvalidParameterError("g^2/(2v) overflows", "g")

    @classmethod
    def from_gamma_units(cls, v_over_gamma: float, omega_c: float = 0.0, omega0: float = 0.0,
                         delta_omega: float = 0.0, n_cells: int = 1,
                         coupling_scale: float = 1.0, gamma_unit: float = 1.0) -> "ModelParams":
        """
        Build parameters from energies expressed in units of a reference gamma.

        The reference coupling is g_ref = sqrt(2 v gamma_unit); ``coupling_scale``
        multiplies it, so the actual gamma is coupling_scale^2 * gamma_unit.
        """
        if gamma_unit <= 0:
            raise InvalidParameterError(f"gamma_unit must be > 0, got {gamma_unit}", "gamma_unit")
        if coupling_scale < 0:
            raise InvalidParameterError(f"coupling_scale must be >= 0, got {coupling_scale}", "coupling_scale")
        v = v_over_gamma * gamma_unit
        g = coupling_scale * math.sqrt(2.0 * v * gamma_unit) if v > 0 else 0.0
        return cls(
            omega_c=omega_c * gamma_unit,
            v=v,
            g=g,
            omega0=omega0 * gamma_unit,
            delta_omega=delta_omega * gamma_unit,
            n_cells=int(n_cells),
        )

    @property
    def omega_a(self) -> float:
        """Upper excited level."""
        return self.omega0 + self.delta_omega

    @property
    def omega_e(self) -> float:
        """Lower excited level."""
        return self.omega0 - self.delta_omega

    def gamma(self) -> float:
        return gamma(self)

    def with_cells(self, n_cells: int) -> "ModelParams":
        return replace(self, n_cells=n_cells)

    def with_detuning(self, delta_omega: float) -> "ModelParams":
        return replace(self, delta_omega=delta_omega)

    def to_gamma_units(self, energy: float) -> float:
        """Express an energy (or energy difference) in units of this model's gamma."""
        scale = self.gamma()
        if scale == 0:
            raise InvalidParameterError("gamma is zero, energies cannot be expressed in units of gamma", "g")
        return energy / scale

    def as_dict(self) -> dict:
        return {
            'omega_c': self.omega_c,
            'v': self.v,
            'g': self.g,
            'omega0': self.omega0,
            'delta_omega': self.delta_omega,
            'n_cells': int(self.n_cells),
            'gamma': self.gamma(),
        }


@dataclass(frozen=True)
class EnergyPoint:
    """A photon energy with its derived wavenumber, Bloch cosine and regime."""
    energy: float
    detuning_from_atom: float
    wavenumber: Optional[float]
    bloch_cosine: float
    regime: Regime
    # |x| == 1 exactly: Chebyshev ratios take their polynomial limit
    band_edge_limit: bool = False

    @property
    def internal_phase(self) -> Optional[float]:
        """q = arccos(x) for a propagating internal wave."""
        if self.regime is Regime.PROPAGATING:
            return math.acos(max(-1.0, min(1.0, self.bloch_cosine)))
        return None

    @property
    def decay_rate(self) -> Optional[float]:
        """kappa = arccosh|x| for an evanescent internal wave."""
        if self.regime is Regime.EVANESCENT or self.band_edge_limit:
            return math.acosh(abs(self.bloch_cosine))
        return None


def gamma(params: ModelParams) -> float:
    """gamma = g^2 / (2v)."""
    return params.g ** 2 / (2.0 * params.v)


def _pole_hit(energy: float, level: float) -> bool:
    return abs(energy - level) <= POLE_TOLERANCE * max(1.0, abs(level))


def at_atom_pole(energy: float, params: ModelParams) -> bool:
    """Atomic levels are poles only while the atoms couple to the field."""
    if params.g == 0:
        return False
    return _pole_hit(energy, params.omega_a) or _pole_hit(energy, params.omega_e)


def effective_energy(energy: float, params: ModelParams) -> float:
    """
    Renormalized site energy left after eliminating the atomic amplitudes.

    g^2 (2E - w_a - w_e) / ((E - w_a)(E - w_e)), evaluated as the equivalent
    g^2 [1/(E - w_a) + 1/(E - w_e)] so that the degenerate case reduces to
    2 g^2 / (E - w0) exactly.

    Raises:
        AtomPoleError: if E lies within the pole tolerance of an atomic level
    """
    if params.g == 0:
        return 0.0
    if at_atom_pole(energy, params):
        raise AtomPoleError(f"E={energy!r} is at an atomic level "
                            f"(w_a={params.omega_a!r}, w_e={params.omega_e!r})")
    g2 = params.g ** 2
    return g2 * (1.0 / (energy - params.omega_a) + 1.0 / (energy - params.omega_e))


def incident_wavenumber(energy: float, params: ModelParams) -> float:
    """
    Lead wavenumber k in (0, pi) from E = omega + 2v cos k.

    Raises:
        LeadBandEdgeError: if |E - omega| >= 2v
    """
    cos_k = (energy - params.omega_c) / (2.0 * params.v)
    if abs(cos_k) >= 1.0:
        raise LeadBandEdgeError(f"E={energy!r} lies outside the open lead band "
                                f"({params.omega_c - 2 * params.v!r}, {params.omega_c + 2 * params.v!r})")
    return math.acos(cos_k)


def bloch_cosine(energy: float, params: ModelParams) -> float:
    """x = -(E - omega - eps~(E)) / 2v."""
    return -(energy - params.omega_c - effective_energy(energy, params)) / (2.0 * params.v)


def classify(energy: float, params: ModelParams) -> EnergyPoint:
    """
    Classify a photon energy. Degenerate cases become regime tags.

    An energy outside the lead band is tagged LeadBandEdge before the pole
    check, since no incident photon exists there at all.
    """
    detuning = energy - params.omega0
    cos_k = (energy - params.omega_c) / (2.0 * params.v)
    if abs(cos_k) >= 1.0:
        return EnergyPoint(energy, detuning, None, math.nan, Regime.LEAD_BAND_EDGE)

    k = math.acos(cos_k)
    if at_atom_pole(energy, params):
        return EnergyPoint(energy, detuning, k, math.nan, Regime.ATOM_POLE)

    x = bloch_cosine(energy, params)
    if abs(x) <= 1.0:
        return EnergyPoint(energy, detuning, k, x, Regime.PROPAGATING, band_edge_limit=abs(x) == 1.0)
    return EnergyPoint(energy, detuning, k, x, Regime.EVANESCENT)


# Integer regime codes used by the vectorised kernels.
REGIME_CODES = (Regime.PROPAGATING, Regime.EVANESCENT, Regime.LEAD_BAND_EDGE, Regime.ATOM_POLE)


def classify_many(energies: np.ndarray, params: ModelParams):
    """
    Vectorised classification.

    Returns:
        (k, x, codes) arrays; k and x are NaN where undefined, codes index
        into ``REGIME_CODES``.
    """
    energies = np.asarray(energies, dtype=float)
    cos_k = (energies - params.omega_c) / (2.0 * params.v)
    in_lead = np.abs(cos_k) < 1.0
    pole = np.zeros(energies.shape, dtype=bool)
    for level in (params.omega_a, params.omega_e):
        pole |= np.abs(energies - level) <= POLE_TOLERANCE * max(1.0, abs(level))
    pole &= in_lead & (params.g > 0)

    with np.errstate(divide='ignore', invalid='ignore'):
        k = np.where(in_lead, np.arccos(np.clip(cos_k, -1.0, 1.0)), np.nan)
        if params.g == 0:
            eps = np.zeros_like(energies)
        else:
            eps = params.g ** 2 * (1.0 / (energies - params.omega_a) + 1.0 / (energies - params.omega_e))
        x = -(energies - params.omega_c - eps) / (2.0 * params.v)
    x = np.where(in_lead & ~pole, x, np.nan)

    codes = np.full(energies.shape, 1, dtype=np.int8)
    codes[np.abs(x) <= 1.0] = 0
    codes[pole] = 3
    codes[~in_lead] = 2
    return k, x, codes
