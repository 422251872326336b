"""
Tests for gap edges, feature half-widths, evanescent attenuation and Dicke scaling.
"""

import math

import numpy as np
import pytest

from src.errors import AtomPoleError, FeatureAbsentError, LeadBandEdgeError, NoGapError, NotEvanescentError
from src.analysis.bands import (
    Feature,
    band_edges_vs_detuning,
    calibrate_semi_width,
    degenerate_gap_edges,
    dicke_scaling,
    find_band_edges,
    gap_attenuation,
    half_maximum_crossings,
    measure_halfwidth,
    probe_decay_rate,
    transmission_vs_cells,
)
from src.physics.line_shapes import SEMI_WIDTH_OVER_GAMMA, dicke_nominal_width
from src.physics.model import ModelParams, classify
from src.physics.scattering import transmission_amplitude


def gamma_units(**kwargs):
    kwargs.setdefault("v_over_gamma", 10.0)
    return ModelParams.from_gamma_units(**kwargs)


class TestBandEdges:
    def test_degenerate_edges_match_closed_form(self, mirror):
        report = find_band_edges(mirror)
        lower, upper = degenerate_gap_edges(mirror)
        assert report.gap_edges[0] == pytest.approx(lower, rel=1e-9)
        assert report.gap_edges[1] == pytest.approx(upper, rel=1e-9)
        assert report.corrected_gap == (lower, upper)
        assert report.nominal_gap == pytest.approx((-2.0, 2.0))

    def test_wide_band_correction_at_ten_gamma(self, mirror):
        # s = v (sqrt(1 + 4 gamma / v) - 1) for w = w0
        expected = 10.0 * (math.sqrt(1.4) - 1.0)
        report = find_band_edges(mirror)
        assert report.gap_edges[1] == pytest.approx(expected, rel=1e-9)
        assert report.gap_edges[0] == pytest.approx(-expected, rel=1e-9)

    @pytest.mark.parametrize("v_over_gamma", [20.0, 40.0, 200.0])
    def test_edges_near_two_gamma_in_wide_band(self, v_over_gamma):
        report = find_band_edges(gamma_units(v_over_gamma=v_over_gamma, n_cells=7))
        assert report.gap_edges[0] == pytest.approx(-2.0, rel=0.05)
        assert report.gap_edges[1] == pytest.approx(2.0, rel=0.05)

    def test_decoupled_has_no_gap(self):
        with pytest.raises(NoGapError):
            find_band_edges(gamma_units(coupling_scale=0.0))

    def test_split_levels(self):
        params = gamma_units(delta_omega=0.5, n_cells=7)
        report = find_band_edges(params)
        assert report.center_allowed
        lo, hi = report.gap_edges
        assert -0.5 < lo < 0.0 < hi < 0.5
        assert report.mirror_edges[0] < -0.5
        assert report.mirror_edges[1] > 0.5
        assert report.corrected_gap is None
        for edge in (*report.gap_edges, *report.mirror_edges):
            assert abs(classify(edge, params).bloch_cosine) == pytest.approx(1.0, abs=1e-9)

    def test_split_edges_agree_with_dense_scan(self):
        params = gamma_units(delta_omega=0.5, n_cells=3)
        report = find_band_edges(params)
        grid = np.linspace(0.0, 0.499, 20001)
        evanescent = [abs(classify(float(s), params).bloch_cosine) > 1.0 for s in grid]
        first = grid[evanescent.index(True)]
        assert report.gap_edges[1] == pytest.approx(first, abs=0.499 / 20000 * 1.01)

    def test_edges_vs_detuning_marks_no_gap(self):
        rows = band_edges_vs_detuning(gamma_units(coupling_scale=0.0), [0.25, 0.5])
        assert all('no_gap' in row for row in rows)

    def test_edges_vs_detuning_widen_allowed_band(self):
        rows = band_edges_vs_detuning(gamma_units(n_cells=3), [0.25, 0.5, 1.0])
        widths = [row['gap_edges'][1] - row['gap_edges'][0] for row in rows]
        assert widths == sorted(widths)
        assert rows[1]['dicke_nominal'] == pytest.approx(0.125)


class TestHalfwidth:
    def test_central_peak_needs_split_levels(self, wide_band):
        with pytest.raises(FeatureAbsentError):
            measure_halfwidth(wide_band, Feature.CENTRAL_PEAK)

    def test_decoupled_feature_absent(self):
        with pytest.raises(FeatureAbsentError):
            measure_halfwidth(gamma_units(coupling_scale=0.0, delta_omega=0.1), Feature.CENTRAL_PEAK)

    def test_single_cell_central_peak_is_dicke_width(self):
        params = gamma_units(delta_omega=0.1)
        assert measure_halfwidth(params, Feature.CENTRAL_PEAK) == pytest.approx(dicke_nominal_width(params), rel=0.05)

    def test_reflection_dip_mirrors_peak_for_one_cell(self):
        params = gamma_units(delta_omega=0.3)
        peak = measure_halfwidth(params, Feature.CENTRAL_PEAK)
        dip = measure_halfwidth(params, Feature.REFLECTION_DIP)
        assert dip == pytest.approx(peak, rel=1e-8)

    def test_accepts_feature_names(self):
        params = gamma_units(delta_omega=0.3)
        assert measure_halfwidth(params, "CentralPeak") == measure_halfwidth(params, Feature.CENTRAL_PEAK)

    def test_semi_width_calibration(self, mirror):
        measured = calibrate_semi_width(mirror)
        assert measured == pytest.approx(SEMI_WIDTH_OVER_GAMMA * mirror.gamma(), rel=0.05)
        single = mirror.with_cells(1)
        assert measure_halfwidth(single, Feature.REFLECTION_PEAK) == pytest.approx(measured)

    @pytest.mark.parametrize("feature", [Feature.CENTRAL_PEAK, Feature.REFLECTION_DIP])
    def test_asymmetric_peak_sides_hit_half_maximum(self, feature):
        params = gamma_units(omega_c=3.0, delta_omega=0.3)
        half = half_maximum_crossings(params, feature)
        assert abs(half.lower_width - half.upper_width) > 1e-6
        for energy in (params.omega0 - half.lower_width, params.omega0 + half.upper_width):
            result = transmission_amplitude(classify(energy, params), params)
            value = result.big_t if feature is Feature.CENTRAL_PEAK else result.big_r
            assert value == pytest.approx(half.level, abs=1e-8)
        assert measure_halfwidth(params, feature) == pytest.approx(half.semi_width)

    def test_symmetric_peak_sides_agree(self):
        params = gamma_units(delta_omega=0.3, n_cells=3)
        half = half_maximum_crossings(params, Feature.CENTRAL_PEAK)
        assert half.lower_width == pytest.approx(half.upper_width, rel=1e-9)
        assert half.semi_width == pytest.approx(half.upper_width, rel=1e-9)
        width = measure_halfwidth(params, Feature.CENTRAL_PEAK)
        for energy in (params.omega0 - width, params.omega0 + width):
            big_t = transmission_amplitude(classify(energy, params), params).big_t
            assert big_t == pytest.approx(half.level, abs=1e-8)

    @pytest.mark.parametrize("v_over_gamma", [10.0, 40.0, 1000.0])
    def test_semi_width_matches_single_cell_root(self, v_over_gamma):
        # one cell: R = 1/2 where 2 gamma / s = sin k
        v = v_over_gamma
        expected = math.sqrt(2.0 * v ** 2 * (1.0 - math.sqrt(1.0 - 4.0 / v ** 2)))
        assert calibrate_semi_width(gamma_units(v_over_gamma=v)) == pytest.approx(expected, rel=1e-9)

    def test_wide_band_constant_is_the_calibrated_limit(self):
        at_figure = calibrate_semi_width(gamma_units(v_over_gamma=10.0))
        assert at_figure == pytest.approx(SEMI_WIDTH_OVER_GAMMA, rel=6e-3)
        wide = calibrate_semi_width(gamma_units(v_over_gamma=1000.0))
        assert wide == pytest.approx(SEMI_WIDTH_OVER_GAMMA, rel=1e-5)


class TestDickeScaling:
    def test_quadratic_in_detuning(self):
        scaling = dicke_scaling(gamma_units(n_cells=1), [0.05, 0.1, 0.2])
        assert scaling.exponent == pytest.approx(2.0, abs=0.05)
        assert scaling.nominal_prefactor == pytest.approx(0.5)
        assert scaling.prefactor == pytest.approx(scaling.nominal_prefactor, rel=0.1)

    def test_peak_narrows_with_detuning(self):
        widths = dicke_scaling(gamma_units(n_cells=1), [0.25, 0.5, 1.0]).widths
        assert widths[0] < widths[1] < widths[2]


class TestAttenuation:
    def test_slope_matches_decay_rate(self):
        params = gamma_units()
        probe = params.omega0 + 1.0
        slope = gap_attenuation(params, probe, range(5, 21))
        kappa = probe_decay_rate(params, probe)
        assert 0.99 <= slope / (-2.0 * kappa) <= 1.01

    def test_propagating_probe_rejected(self):
        with pytest.raises(NotEvanescentError):
            gap_attenuation(gamma_units(), 5.0, range(5, 21))

    def test_pole_probe_rejected(self):
        with pytest.raises(AtomPoleError):
            gap_attenuation(gamma_units(), 0.0, range(5, 21))

    def test_outside_lead_probe_rejected(self):
        with pytest.raises(LeadBandEdgeError):
            gap_attenuation(gamma_units(), 25.0, range(5, 21))

    def test_needs_two_cell_counts(self):
        with pytest.raises(ValueError):
            gap_attenuation(gamma_units(), 1.0, [5])


class TestTransmissionVsCells:
    def test_evanescent_decays(self):
        values = transmission_vs_cells(gamma_units(), 1.0, range(1, 8))
        assert np.all(np.diff(values) < 0)

    def test_propagating_stays_bounded(self):
        values = transmission_vs_cells(gamma_units(), 5.0, range(1, 30))
        assert np.all(values <= 1.0 + 1e-12)
        assert values.min() > 0.0
