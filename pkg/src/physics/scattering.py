"""
Closed-form single-photon scattering amplitudes through the doped region.

The primary evaluator is a single Chebyshev formulation valid on every
branch of the Bloch cosine x:

    Delta = e^{-ik} U_N(x) + 2 U_{N-1}(x) + e^{ik} U_{N-2}(x)
    t     = (-1)^{N+1} 2i e^{-ikN} sin k / Delta
    r     = -2 e^{ik} (cos k + x) U_{N-1}(x) / Delta

The (-1)^{N+1} phase comes from substituting the plane-wave ansatz
u_j = e^{ikj} + r e^{-ikj} (j < 1), u_j = t e^{ikj} (j > N) literally; it
does not change any probability. Both the r numerator and Delta are evaluated
through cos k + x = eps~(E)/2v rather than by adding the two cosines, since
that sum cancels near the lower lead band edge. The real-valued
trigonometric/hyperbolic
probability formulas are kept as a second path (``probabilities_closed_form``)
used for validation.
"""

import math
import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from ..errors import AtomPoleError, LeadBandEdgeError
from .model import REGIME_CODES, EnergyPoint, ModelParams, Regime, classify_many

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """Reflection/transmission amplitudes and probabilities at one energy."""
    r: complex
    t: complex
    big_r: float
    big_t: float
    regime: Regime

    @classmethod
    def from_amplitudes(cls, r: complex, t: complex, regime: Regime) -> "ScatteringAmplitudes":
        return cls(r=complex(r), t=complex(t), big_r=abs(r) ** 2, big_t=abs(t) ** 2, regime=regime)

    @property
    def unitarity_defect(self) -> float:
        return abs(self.big_r + self.big_t - 1.0)


@dataclass(frozen=True)
class ScatterArrays:
    """Vectorised amplitudes over an energy grid."""
    energies: np.ndarray
    r: np.ndarray
    t: np.ndarray
    codes: np.ndarray

    @property
    def big_r(self) -> np.ndarray:
        return np.abs(self.r) ** 2

    @property
    def big_t(self) -> np.ndarray:
        return np.abs(self.t) ** 2

    def regimes(self):
        return [REGIME_CODES[c] for c in self.codes]


def _chebyshev_u(n: int, x: ArrayLike, shift: int = 0) -> np.ndarray:
    """
    U_n(x), multiplied by e^{-shift*kappa} on the |x| > 1 branch.

    The shift lets a caller divide a whole family U_{N-2..N} by the same
    e^{(N-1)kappa} so that deep-gap evaluations never overflow.
    """
    x = np.asarray(x, dtype=float)
    if n == -1:
        return np.zeros_like(x)
    if n == 0 and shift == 0:
        return np.ones_like(x)

    ax = np.abs(x)
    sign_n = np.where(x < 0, (-1.0) ** n, 1.0)
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        theta = np.arccos(np.clip(x, -1.0, 1.0))
        trig = np.sin((n + 1) * theta) / np.sin(theta)

        kappa = np.arccosh(np.maximum(ax, 1.0))
        arg = (n + 1) * kappa
        if shift == 0:
            grown = np.sinh(arg)
        else:
            grown = np.where(arg < 700.0,
                             np.sinh(arg) * np.exp(-shift * kappa),
                             0.5 * np.exp((n + 1 - shift) * kappa))
        hyp = sign_n * grown / np.sinh(kappa)

        edge = sign_n * (n + 1.0)
    return np.where(ax < 1.0, trig, np.where(ax == 1.0, edge, hyp))


def chebyshev_u(n: int, x: ArrayLike) -> ArrayLike:
    """
    Chebyshev polynomial of the second kind U_n(x) for any real x.

    Uses sin((n+1)q)/sin q with q = arccos x for |x| < 1, the polynomial limit
    (+-1)^n (n+1) at |x| = 1 and (+-1)^n sinh((n+1)k)/sinh k with
    k = arccosh|x| outside. U_{-1} = 0, U_0 = 1.
    """
    if n < -1:
        raise ValueError(f"n must be >= -1, got {n}")
    value = _chebyshev_u(n, x)
    return float(value) if value.ndim == 0 else value


def _delta_and_numerator(x: np.ndarray, k: np.ndarray, s: np.ndarray, n_cells: int):
    """
    Scaled Delta and the common U_{N-1} factor; both carry e^{-(N-1)kappa}.

    With s = eps~/2v = cos k + x, Delta is assembled as
    2 (sin^2 k + s cos k) U_{N-1} - i sin k (U_N - U_{N-2}), which keeps
    full relative accuracy where x -> -1 and k -> 0 together.
    """
    shift = n_cells - 1
    u_n = _chebyshev_u(n_cells, x, shift)
    u_n1 = _chebyshev_u(n_cells - 1, x, shift)
    u_n2 = _chebyshev_u(n_cells - 2, x, shift)
    sin_k, cos_k = np.sin(k), np.cos(k)
    delta = 2.0 * (sin_k ** 2 + s * cos_k) * u_n1 - 1j * sin_k * (u_n - u_n2)
    return delta, u_n1


def _amplitude_arrays(x: np.ndarray, k: np.ndarray, s: np.ndarray,
                      n_cells: int) -> Tuple[np.ndarray, np.ndarray]:
    delta, u_n1 = _delta_and_numerator(x, k, s, n_cells)
    with np.errstate(over='ignore', invalid='ignore'):
        kappa = np.arccosh(np.maximum(np.abs(x), 1.0))
        unscale = np.exp(-(n_cells - 1) * kappa)
    phase = -1.0 if n_cells % 2 == 0 else 1.0
    t = phase * 2j * np.exp(-1j * k * n_cells) * np.sin(k) * unscale / delta
    r = -2.0 * np.exp(1j * k) * s * u_n1 / delta
    return r, t


def _half_site_energy(energies: np.ndarray, params: ModelParams) -> np.ndarray:
    """eps~(E) / 2v for energies known to be off the atomic levels."""
    if params.g == 0:
        return np.zeros_like(energies)
    with np.errstate(divide='ignore', invalid='ignore'):
        eps = params.g ** 2 * (1.0 / (energies - params.omega_a) + 1.0 / (energies - params.omega_e))
    return eps / (2.0 * params.v)


def _require_scattering(point: EnergyPoint) -> None:
    if point.regime is Regime.LEAD_BAND_EDGE:
        raise LeadBandEdgeError(f"E={point.energy!r} has no propagating incident photon")
    if point.regime is Regime.ATOM_POLE:
        raise AtomPoleError(f"E={point.energy!r} is at an atomic level")


def denominator_delta(point: EnergyPoint, params: ModelParams) -> complex:
    """
    Delta = e^{-ik} U_N(x) + 2 U_{N-1}(x) + e^{ik} U_{N-2}(x), unscaled.

    Raises:
        LeadBandEdgeError, AtomPoleError: for non-scattering regimes
    """
    _require_scattering(point)
    n = params.n_cells
    x, k = np.asarray(point.bloch_cosine), np.asarray(point.wavenumber)
    s = _half_site_energy(np.asarray(point.energy), params)
    sin_k = np.sin(k)
    value = (2.0 * (sin_k ** 2 + s * np.cos(k)) * _chebyshev_u(n - 1, x)
             - 1j * sin_k * (_chebyshev_u(n, x) - _chebyshev_u(n - 2, x)))
    return complex(value)


def transmission_amplitude(point: EnergyPoint, params: ModelParams) -> ScatteringAmplitudes:
    """
    Reflection and transmission amplitudes at a classified energy.

    At an atomic level the amplitudes take their kappa -> infinity limit,
    t = 0 and r = -e^{2ik}.

    Raises:
        LeadBandEdgeError: when no incident propagating photon exists
    """
    if point.regime is Regime.LEAD_BAND_EDGE:
        raise LeadBandEdgeError(f"E={point.energy!r} has no propagating incident photon")
    if point.regime is Regime.ATOM_POLE:
        return ScatteringAmplitudes.from_amplitudes(-np.exp(2j * point.wavenumber), 0.0, point.regime)

    s = _half_site_energy(np.asarray(point.energy, dtype=float), params)
    r, t = _amplitude_arrays(np.asarray(point.bloch_cosine), np.asarray(point.wavenumber), s, params.n_cells)
    return ScatteringAmplitudes.from_amplitudes(complex(r), complex(t), point.regime)


def probabilities_closed_form(point: EnergyPoint, params: ModelParams) -> Tuple[float, float]:
    """
    R and T from the real-valued oscillating (|x| <= 1) and hyperbolic
    (|x| > 1) formulas.

    On the hyperbolic branch cos q is replaced by x = sign(x) cosh(kappa), so
    the x <= -1 tail is covered as well. At |x| = 1 the sin(Nq)/sin q ratio
    takes its limit N.
    """
    _require_scattering(point)
    n = params.n_cells
    x, k = point.bloch_cosine, point.wavenumber
    ck, sk = math.cos(k), math.sin(k)

    if point.band_edge_limit:
        big_t = 1.0 / (1.0 + (n * (1.0 + x * ck) / sk) ** 2)
        big_r = n ** 2 * (x + ck) ** 2 / (n ** 2 * (1.0 + x * ck) ** 2 + sk ** 2)
        return big_r, big_t

    if point.regime is Regime.PROPAGATING:
        q = math.acos(x)
        s_nq, c_nq, sq = math.sin(n * q), math.cos(n * q), math.sin(q)
        big_t = 1.0 / (c_nq ** 2 + (s_nq * (1.0 + x * ck) / (sq * sk)) ** 2)
        big_r = (s_nq ** 2 * (x + ck) ** 2
                 / (s_nq ** 2 * (ck * x + 1.0) ** 2 + (sk * sq * c_nq) ** 2))
        return big_r, big_t

    kappa = math.acosh(abs(x))
    with np.errstate(over='ignore'):
        sh_n, ch_n = np.sinh(n * kappa), np.cosh(n * kappa)
        coth_n = 1.0 / np.tanh(n * kappa)
    s_kappa = math.sinh(kappa)
    big_t = float(1.0 / (ch_n ** 2 + (sh_n * (1.0 + x * ck) / (s_kappa * sk)) ** 2))
    # numerator and denominator divided by sinh^2(N kappa)
    big_r = float((x + ck) ** 2 / ((ck * x + 1.0) ** 2 + (sk * s_kappa * coth_n) ** 2))
    return big_r, big_t


def scatter_many(energies: np.ndarray, params: ModelParams) -> ScatterArrays:
    """
    Vectorised amplitudes over an array of energies.

    Pole entries carry t = 0, r = -e^{2ik}; entries outside the lead band
    carry NaN amplitudes.
    """
    energies = np.asarray(energies, dtype=float)
    k, x, codes = classify_many(energies, params)
    r = np.full(energies.shape, np.nan + 0j, dtype=complex)
    t = np.full(energies.shape, np.nan + 0j, dtype=complex)

    scattering = codes <= 1
    if np.any(scattering):
        s = _half_site_energy(energies[scattering], params)
        r_s, t_s = _amplitude_arrays(x[scattering], k[scattering], s, params.n_cells)
        r[scattering] = r_s
        t[scattering] = t_s

    pole = codes == 3
    if np.any(pole):
        r[pole] = -np.exp(2j * k[pole])
        t[pole] = 0.0
        logger.debug(f"{int(pole.sum())} grid energies at atomic levels")
    return ScatterArrays(energies=energies, r=r, t=t, codes=codes)
