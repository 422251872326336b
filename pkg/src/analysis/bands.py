"""
Band-structure measurements on the analytic spectrum: gap edges, half-widths
of resonant features, evanescent attenuation and Dicke-width scaling.

Roots are located by scanning logarithmically spaced offsets from the atomic
level centre for a sign change and refining it by bisection.
"""

import math
import logging
from enum import Enum
from dataclasses import asdict, dataclass, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from ..errors import AtomPoleError, FeatureAbsentError, NoGapError, NotEvanescentError, LeadBandEdgeError
from ..physics.line_shapes import dicke_nominal_width
from ..physics.model import ModelParams, Regime, at_atom_pole, bloch_cosine, classify, gamma
from ..physics.scattering import transmission_amplitude

logger = logging.getLogger(__name__)

SCAN_SAMPLES = 4000
# smallest scanned offset, relative to gamma
SCAN_START = 1e-12
BISECT_RTOL = 4 * np.finfo(float).eps
BISECT_XTOL = 1e-15


class Feature(str, Enum):
    CENTRAL_PEAK = "CentralPeak"
    REFLECTION_DIP = "ReflectionDip"
    REFLECTION_PEAK = "ReflectionPeak"


@dataclass
class BandReport:
    """Gap geometry and derived widths; energies are absolute (raw units)."""
    gap_edges: Tuple[float, float]
    nominal_gap: Tuple[float, float]
    mirror_edges: Tuple[float, float]
    center_allowed: bool
    dicke_halfwidth: Optional[float] = None
    dicke_nominal: Optional[float] = None
    attenuation_slope: Optional[float] = None
    kappa_reference: Optional[float] = None
    corrected_gap: Optional[Tuple[float, float]] = None

    def to_dict(self) -> dict:
        return asdict(self)


def degenerate_gap_edges(params: ModelParams) -> Tuple[float, float]:
    """
    Closed-form gap edges for degenerate levels (delta_omega = 0).

    With E = w0 + s the conditions x = +1 and x = -1 become
    s^2 - b s - 2 g^2 = 0 with b = w - w0 -+ 2v; the roots nearest w0 bound
    the gap. For w = w0 this is s = +-v(sqrt(1 + 4 gamma/v) - 1).
    """
    if params.delta_omega != 0:
        raise ValueError("closed-form edges need delta_omega = 0")
    g2 = params.g ** 2
    b_upper = params.omega_c - params.omega0 - 2.0 * params.v
    b_lower = params.omega_c - params.omega0 + 2.0 * params.v
    upper = 0.5 * (b_upper + math.sqrt(b_upper ** 2 + 8.0 * g2))
    lower = 0.5 * (b_lower - math.sqrt(b_lower ** 2 + 8.0 * g2))
    return params.omega0 + lower, params.omega0 + upper


def _transmission(energy: float, params: ModelParams) -> float:
    return transmission_amplitude(classify(energy, params), params).big_t


def _reflection(energy: float, params: ModelParams) -> float:
    return transmission_amplitude(classify(energy, params), params).big_r


def _edge_function(params: ModelParams) -> Callable[[float], float]:
    """|x(E)| - 1; atomic levels count as deep inside the gap."""
    def f(energy: float) -> float:
        if at_atom_pole(energy, params):
            return 1.0
        return abs(bloch_cosine(energy, params)) - 1.0
    return f


def _lead_reach(params: ModelParams, direction: int) -> float:
    """Distance from w0 to the lead band edge in ``direction``, kept strictly inside."""
    edge = params.omega_c + direction * 2.0 * params.v
    reach = direction * (edge - params.omega0)
    return reach * (1.0 - 1e-9)


def _offsets(start: float, stop: float, scale: float, samples: int) -> np.ndarray:
    if stop <= start:
        return np.array([])
    first = SCAN_START * scale
    span = stop - start
    if span <= first:
        return np.array([start + 0.5 * span])
    tail = start + np.geomspace(first, span, samples)
    # the last sample would sit on ``stop`` (a pole or the lead edge)
    tail[-1] = start + span * (1.0 - 1e-9)
    return tail


def _bisect(f: Callable[[float], float], a: float, b: float) -> float:
    xtol = BISECT_XTOL * max(1.0, abs(a), abs(b))
    return optimize.bisect(f, a, b, xtol=xtol, rtol=BISECT_RTOL, maxiter=400)


def _first_crossing(f: Callable[[float], float], center: float, direction: int,
                    offsets: np.ndarray) -> Optional[float]:
    """First sign change of f along center + direction*offsets, refined by bisection."""
    previous_energy, previous_value = None, None
    for offset in offsets:
        energy = center + direction * offset
        value = f(energy)
        if previous_value is not None and value == 0.0:
            return energy
        if previous_value is not None and (previous_value < 0) != (value < 0):
            lo, hi = sorted((previous_energy, energy))
            return _bisect(f, lo, hi)
        previous_energy, previous_value = energy, value
    return None


def find_band_edges(params: ModelParams, samples: int = SCAN_SAMPLES) -> BandReport:
    """
    Locate the |x| = 1 crossings nearest w0 on each side, plus the outer
    crossings beyond the atomic levels (the quantum-mirror window).

    Raises:
        NoGapError: when no sign change is bracketed on either side
    """
    g = gamma(params)
    if g == 0:
        raise NoGapError("atoms are decoupled (g = 0), no gap forms")
    f = _edge_function(params)
    center = params.omega0

    nearest, outer = [], []
    for direction in (-1, 1):
        reach = _lead_reach(params, direction)
        if reach <= 0:
            raise NoGapError(f"w0 lies outside the lead band on side {direction:+d}")
        offsets = np.concatenate(([0.0], _offsets(0.0, reach, g, samples)))
        edge = _first_crossing(f, center, direction, offsets)
        if edge is None:
            raise NoGapError(f"no |x| = 1 crossing bracketed on side {direction:+d}")
        nearest.append(edge)

        pole_offset = params.delta_omega
        if pole_offset > 0 and pole_offset < reach:
            mirror = _first_crossing(f, center, direction, _offsets(pole_offset, reach, g, samples))
            outer.append(mirror if mirror is not None else edge)
        else:
            outer.append(edge)

    center_point = classify(center, params)
    report = BandReport(
        gap_edges=(nearest[0], nearest[1]),
        nominal_gap=(center - 2.0 * g, center + 2.0 * g),
        mirror_edges=(outer[0], outer[1]),
        center_allowed=center_point.regime is Regime.PROPAGATING,
        corrected_gap=degenerate_gap_edges(params) if params.delta_omega == 0 else None,
    )
    logger.debug(f"Band edges for N={params.n_cells}, dw={params.delta_omega}: {report.gap_edges}")
    return report


@dataclass(frozen=True)
class HalfMaximum:
    """
    Half-maximum crossings of a feature measured from w0.

    For w = w0 the spectrum is even about w0 and both side widths agree;
    otherwise the feature is asymmetric and only the per-side widths satisfy
    T(w0 - lower_width) = T(w0 + upper_width) = level.
    """
    center: float
    level: float
    lower: float
    upper: float

    @property
    def lower_width(self) -> float:
        return self.center - self.lower

    @property
    def upper_width(self) -> float:
        return self.upper - self.center

    @property
    def semi_width(self) -> float:
        return 0.5 * (self.upper - self.lower)


def half_maximum_crossings(params: ModelParams, feature: Feature, samples: int = SCAN_SAMPLES) -> HalfMaximum:
    """
    Half-maximum crossings of a spectral feature centred on w0, refined by
    bisection.

    CentralPeak: transmission peak at w0 between the two atomic levels.
    ReflectionDip: the matching reflection dip, at half depth.
    ReflectionPeak: reflection peak around the atomic levels, measured at
    R = 1/2 outward from the outermost level.

    Raises:
        FeatureAbsentError: when the peak/dip or its half-maximum crossing
            cannot be found
    """
    feature = Feature(feature)
    g = gamma(params)
    if g == 0:
        raise FeatureAbsentError("atoms are decoupled (g = 0), the spectrum is flat")
    center = params.omega0
    crossings = []

    if feature in (Feature.CENTRAL_PEAK, Feature.REFLECTION_DIP):
        if params.delta_omega == 0:
            raise FeatureAbsentError(f"{feature.value} needs delta_omega > 0")
        point = classify(center, params)
        if not point.regime.is_scattering:
            raise FeatureAbsentError(f"w0 is not a scattering energy ({point.regime.value})")
        height = transmission_amplitude(point, params).big_t
        if height <= 1e-12:
            raise FeatureAbsentError("no transmission peak at w0")
        if feature is Feature.CENTRAL_PEAK:
            level = 0.5 * height

            def f(energy):
                return _transmission(energy, params) - level
        else:
            level = 0.5 * ((1.0 - height) + 1.0)

            def f(energy):
                return _reflection(energy, params) - level

        for direction in (-1, 1):
            reach = min(params.delta_omega, _lead_reach(params, direction))
            edge = _first_crossing(f, center, direction, np.concatenate(([0.0], _offsets(0.0, reach, g, samples))))
            if edge is None:
                raise FeatureAbsentError(f"no half-maximum crossing of {feature.value} on side {direction:+d}")
            crossings.append(edge)
    else:
        level = 0.5

        def f(energy):
            return _reflection(energy, params) - level

        for direction in (-1, 1):
            reach = _lead_reach(params, direction)
            if params.delta_omega >= reach:
                raise FeatureAbsentError("atomic levels lie outside the lead band")
            edge = _first_crossing(f, center, direction, _offsets(params.delta_omega, reach, g, samples))
            if edge is None:
                raise FeatureAbsentError(f"reflection never drops below 1/2 on side {direction:+d}")
            crossings.append(edge)

    return HalfMaximum(center=center, level=level, lower=crossings[0], upper=crossings[1])


def measure_halfwidth(params: ModelParams, feature: Feature, samples: int = SCAN_SAMPLES) -> float:
    """
    Semi-width of a feature: half the distance between its two half-maximum
    crossings. This equals each side width when w = w0; use
    :func:`half_maximum_crossings` for the per-side widths of an asymmetric
    feature.
    """
    return half_maximum_crossings(params, feature, samples).semi_width


def calibrate_semi_width(params: ModelParams) -> float:
    """Measured reflection semi-width of a single degenerate cell (N=1, dw=0)."""
    single = replace(params, n_cells=1, delta_omega=0.0)
    return measure_halfwidth(single, Feature.REFLECTION_PEAK)


def gap_attenuation(params: ModelParams, probe_energy: float, n_range: Sequence[int]) -> float:
    """
    Least-squares slope of log T against N at a fixed in-gap energy.

    Compare with -2 kappa(probe_energy).

    Raises:
        NotEvanescentError: probe energy propagates inside the doped region
        LeadBandEdgeError, AtomPoleError: for non-scattering probes
    """
    point = classify(probe_energy, params)
    if point.regime is Regime.LEAD_BAND_EDGE:
        raise LeadBandEdgeError(f"probe E={probe_energy!r} is outside the lead band")
    if point.regime is Regime.ATOM_POLE:
        raise AtomPoleError(f"probe E={probe_energy!r} is at an atomic level")
    if point.regime is not Regime.EVANESCENT:
        raise NotEvanescentError(f"probe E={probe_energy!r} is {point.regime.value}, not evanescent")

    cells = [int(n) for n in n_range]
    if len(cells) < 2:
        raise ValueError("n_range needs at least two cell counts")
    log_t = []
    for n in cells:
        big_t = transmission_amplitude(point, params.with_cells(n)).big_t
        if big_t <= 0:
            raise NotEvanescentError(f"T underflows at N={n}; shorten n_range")
        log_t.append(math.log(big_t))
    slope, _ = np.polyfit(np.array(cells, dtype=float), np.array(log_t), 1)
    return float(slope)


def probe_decay_rate(params: ModelParams, probe_energy: float) -> float:
    """kappa at a probe energy, for comparison with the attenuation slope."""
    point = classify(probe_energy, params)
    if point.regime is not Regime.EVANESCENT:
        raise NotEvanescentError(f"probe E={probe_energy!r} is {point.regime.value}, not evanescent")
    return point.decay_rate


@dataclass
class DickeScaling:
    detunings: List[float]
    widths: List[float]
    exponent: float
    prefactor: float
    nominal_prefactor: float


def dicke_scaling(params: ModelParams, detunings: Sequence[float]) -> DickeScaling:
    """Log-log regression of the central-peak semi-width against delta_omega."""
    widths = [measure_halfwidth(params.with_detuning(d), Feature.CENTRAL_PEAK) for d in detunings]
    exponent, intercept = np.polyfit(np.log(detunings), np.log(widths), 1)
    return DickeScaling(
        detunings=[float(d) for d in detunings],
        widths=[float(w) for w in widths],
        exponent=float(exponent),
        prefactor=float(math.exp(intercept)),
        nominal_prefactor=1.0 / (2.0 * gamma(params)),
    )


def band_edges_vs_detuning(params: ModelParams, detunings: Sequence[float]) -> List[dict]:
    """Gap edges for each level splitting; NoGap entries are marked."""
    rows = []
    for d in detunings:
        current = params.with_detuning(d)
        try:
            report = find_band_edges(current)
            rows.append({
                'delta_omega': float(d),
                'gap_edges': list(report.gap_edges),
                'mirror_edges': list(report.mirror_edges),
                'center_allowed': report.center_allowed,
                'dicke_nominal': dicke_nominal_width(current),
            })
        except NoGapError as e:
            rows.append({'delta_omega': float(d), 'no_gap': str(e)})
    return rows


def transmission_vs_cells(params: ModelParams, energy: float, n_values: Sequence[int]) -> np.ndarray:
    """T at a fixed energy as the number of doped cells varies."""
    point = classify(energy, params)
    return np.array([transmission_amplitude(point, params.with_cells(int(n))).big_t for n in n_values])
