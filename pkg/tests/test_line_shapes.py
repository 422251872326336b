"""
Tests for the wide-band line shapes and their agreement with the exact spectrum.
"""

import numpy as np
import pytest

from src.errors import InvalidParameterError
from src.physics.line_shapes import (
    SEMI_WIDTH_OVER_GAMMA,
    LineShapeKind,
    LineShapeParams,
    breit_wigner_reflection,
    dicke_line_shapes,
    dicke_nominal_width,
    fano_transmission,
    line_shape_params,
    wide_band_semi_width,
)
from src.physics.model import ModelParams, classify
from src.physics.scattering import transmission_amplitude


class TestBreitWigner:
    def test_peak(self, wide_band):
        assert breit_wigner_reflection(wide_band.omega0, wide_band) == 1.0

    def test_half_maximum_at_semi_width(self, wide_band):
        w = wide_band_semi_width(wide_band)
        assert breit_wigner_reflection(wide_band.omega0 + w, wide_band) == pytest.approx(0.5)

    def test_explicit_width(self, wide_band):
        assert breit_wigner_reflection(3.0, wide_band, width=3.0) == pytest.approx(0.5)


class TestFano:
    def test_zero_at_centre(self, wide_band):
        assert fano_transmission(wide_band.omega0, wide_band) == 0.0

    def test_asymptote(self, wide_band):
        assert fano_transmission(1e6, wide_band) == pytest.approx(1.0, abs=1e-10)

    def test_half_at_semi_width(self, wide_band):
        w = wide_band_semi_width(wide_band)
        assert fano_transmission(-w, wide_band) == pytest.approx(0.5)

    def test_complements_breit_wigner(self, wide_band):
        for energy in np.linspace(-6.0, 6.0, 25):
            total = fano_transmission(energy, wide_band) + breit_wigner_reflection(energy, wide_band)
            assert total == pytest.approx(1.0)


class TestDicke:
    def test_nominal_width(self):
        params = ModelParams.from_gamma_units(v_over_gamma=10.0, delta_omega=0.1)
        assert dicke_nominal_width(params) == pytest.approx(0.005)

    def test_nominal_width_needs_coupling(self):
        params = ModelParams.from_gamma_units(v_over_gamma=10.0, delta_omega=0.1, coupling_scale=0.0)
        with pytest.raises(InvalidParameterError):
            dicke_nominal_width(params)

    def test_centre(self):
        params = ModelParams.from_gamma_units(v_over_gamma=10.0, delta_omega=0.1)
        r_approx, t_approx = dicke_line_shapes(params.omega0, params)
        assert r_approx == 0.0
        assert t_approx == 1.0

    def test_far_tail(self):
        params = ModelParams.from_gamma_units(v_over_gamma=10.0, delta_omega=0.1)
        _, t_approx = dicke_line_shapes(500.0, params)
        assert t_approx == pytest.approx(1.0, abs=1e-4)

    def test_approximates_exact_transmission(self):
        params = ModelParams.from_gamma_units(v_over_gamma=10.0, delta_omega=0.1, n_cells=1)
        worst = 0.0
        for energy in np.linspace(-6.0, 6.0, 2001):
            point = classify(float(energy), params)
            if not point.regime.is_scattering:
                continue
            exact = transmission_amplitude(point, params).big_t
            worst = max(worst, abs(exact - dicke_line_shapes(float(energy), params)[1]))
        assert worst <= 0.05


class TestLineShapeParams:
    def test_default_broad_width_is_wide_band(self, wide_band):
        shape = line_shape_params(LineShapeKind.FANO_T, wide_band)
        assert shape.broad_width == pytest.approx(SEMI_WIDTH_OVER_GAMMA * wide_band.gamma())
        assert shape.narrow_width == 0.0

    @pytest.mark.parametrize("broad, narrow", [(0.0, 0.0), (-1.0, 0.0), (1.0, -0.1), (1.0, 2.0)])
    def test_invalid_widths(self, broad, narrow):
        with pytest.raises(InvalidParameterError):
            LineShapeParams(kind=LineShapeKind.DICKE_R, center=0.0, broad_width=broad, narrow_width=narrow)

    def test_dicke_reflection_dip_reaches_zero(self):
        shape = LineShapeParams(kind=LineShapeKind.DICKE_R, center=0.0, broad_width=2.0, narrow_width=0.01)
        assert shape.evaluate(0.0) == 0.0
        assert shape.evaluate(0.5) > 0.8
