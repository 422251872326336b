"""
Wide-band line shapes: Breit-Wigner reflection, symmetric Fano transmission
and the Dicke superposition of a broad and a narrow resonance.

The detuning Omega - omega0 of these formulas is the photon energy measured
from the atomic level centre, E - omega0.
"""

import logging
from enum import Enum
from dataclasses import dataclass
from typing import Optional, Tuple

from ..errors import InvalidParameterError
from .model import ModelParams, gamma

logger = logging.getLogger(__name__)

# Semi-width of the single-cell resonance in units of gamma, as pinned by the
# N=1 calibration sweep (analysis.bands.calibrate_semi_width).
SEMI_WIDTH_OVER_GAMMA = 2.0


class LineShapeKind(str, Enum):
    BREIT_WIGNER_R = "BreitWignerR"
    FANO_T = "FanoT"
    DICKE_R = "DickeR"
    DICKE_T = "DickeT"


@dataclass(frozen=True)
class LineShapeParams:
    kind: LineShapeKind
    center: float
    broad_width: float
    narrow_width: float

    def __post_init__(self):
        if self.broad_width <= 0:
            raise InvalidParameterError(f"broad_width must be > 0, got {self.broad_width}", "broad_width")
        if self.narrow_width < 0:
            raise InvalidParameterError(f"narrow_width must be >= 0, got {self.narrow_width}", "narrow_width")
        if self.narrow_width > self.broad_width:
            raise InvalidParameterError(
                f"narrow_width {self.narrow_width} exceeds broad_width {self.broad_width}", "narrow_width")

    def evaluate(self, energy: float) -> float:
        s = energy - self.center
        if self.kind is LineShapeKind.BREIT_WIGNER_R:
            return _lorentz(s, self.broad_width)
        if self.kind is LineShapeKind.FANO_T:
            return 1.0 - _lorentz(s, self.broad_width)
        if self.kind is LineShapeKind.DICKE_R:
            return _lorentz(s, self.broad_width) - _lorentz(s, self.narrow_width)
        return 1.0 - _lorentz(s, self.broad_width) + _lorentz(s, self.narrow_width)


def _lorentz(s: float, width: float) -> float:
    """Unit-height Lorentzian w^2 / (s^2 + w^2); zero width gives a point peak."""
    if width == 0:
        return 1.0 if s == 0 else 0.0
    return width ** 2 / (s ** 2 + width ** 2)


def wide_band_semi_width(params: ModelParams) -> float:
    """Semi-width g^2/v of the single-cell resonance for v >> gamma."""
    return SEMI_WIDTH_OVER_GAMMA * gamma(params)


def dicke_nominal_width(params: ModelParams) -> float:
    """delta = delta_omega^2 / (2 gamma)."""
    g = gamma(params)
    if g == 0:
        raise InvalidParameterError("gamma is zero, the Dicke width is undefined", "g")
    return params.delta_omega ** 2 / (2.0 * g)


def line_shape_params(kind: LineShapeKind, params: ModelParams,
                      broad_width: Optional[float] = None) -> LineShapeParams:
    broad = wide_band_semi_width(params) if broad_width is None else broad_width
    narrow = dicke_nominal_width(params) if kind in (LineShapeKind.DICKE_R, LineShapeKind.DICKE_T) else 0.0
    return LineShapeParams(kind=kind, center=params.omega0, broad_width=broad, narrow_width=narrow)


def breit_wigner_reflection(energy: float, params: ModelParams, width: Optional[float] = None) -> float:
    """R = w^2 / ((E - w0)^2 + w^2)."""
    return line_shape_params(LineShapeKind.BREIT_WIGNER_R, params, width).evaluate(energy)


def fano_transmission(energy: float, params: ModelParams, width: Optional[float] = None) -> float:
    """T = (eps + q)^2 / (eps^2 + 1) with q = 0 and eps = (E - w0)/w."""
    shape = line_shape_params(LineShapeKind.FANO_T, params, width)
    eps = (energy - shape.center) / shape.broad_width
    return eps ** 2 / (eps ** 2 + 1.0)


def dicke_line_shapes(energy: float, params: ModelParams,
                      width: Optional[float] = None) -> Tuple[float, float]:
    """
    Small-detuning approximation: R ~ BW(w) - BW(delta), T ~ Fano(w) + BW(delta).

    Valid for delta_omega << gamma; the caller judges the window.
    """
    r_approx = line_shape_params(LineShapeKind.DICKE_R, params, width).evaluate(energy)
    t_approx = line_shape_params(LineShapeKind.DICKE_T, params, width).evaluate(energy)
    return r_approx, t_approx
