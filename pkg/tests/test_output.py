"""
Tests for spectrum files, report JSON and emitted plot scripts.
"""

import json

import numpy as np
import pytest

from src.analysis.spectrum import sweep, uniform_grid
from src.cli.output import (
    CSV_HEADER,
    format_float,
    read_spectrum_csv,
    spectrum_path,
    spectrum_to_dict,
    write_json,
    write_overlay_script,
    write_plot_script,
    write_spectrum_csv,
)
from src.physics.model import Regime


@pytest.fixture
def spectrum(wide_band):
    # the outer points fall outside the lead band, zero hits the pole
    return sweep(wide_band, np.concatenate([[-25.0], uniform_grid(-3.0, 3.0, 61), [25.0]]))


class TestCsv:
    def test_read_back_is_exact(self, spectrum, tmp_path):
        path = write_spectrum_csv(spectrum, tmp_path / "spectrum.csv")
        table = read_spectrum_csv(path)
        np.testing.assert_array_equal(table.grid, spectrum.grid)
        np.testing.assert_array_equal(table.transmission, spectrum.transmission())
        np.testing.assert_array_equal(table.reflection, spectrum.reflection())
        assert table.regimes == spectrum.regimes()

    def test_outside_points_are_nan(self, spectrum, tmp_path):
        table = read_spectrum_csv(write_spectrum_csv(spectrum, tmp_path / "spectrum.csv"))
        assert table.regimes[0] is Regime.LEAD_BAND_EDGE
        assert np.isnan(table.transmission[0])
        assert np.isnan(table.reflection[-1])
        assert Regime.ATOM_POLE in table.regimes

    def test_layout(self, spectrum, tmp_path):
        path = write_spectrum_csv(spectrum, tmp_path / "out" / "spectrum.csv")
        raw = path.read_bytes()
        assert b"\r\n" not in raw
        lines = raw.decode("utf-8").splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert len(lines) == 1 + len(spectrum.points)
        assert not (tmp_path / "out" / "spectrum.csv.tmp").exists()

    def test_bad_header(self, tmp_path):
        path = tmp_path / "other.csv"
        path.write_text("x,y\n1,2\n", encoding="utf-8")
        with pytest.raises(ValueError):
            read_spectrum_csv(path)

    def test_format_float(self):
        assert format_float(float("nan")) == "nan"
        assert float(format_float(0.1)) == 0.1
        assert format_float(1.0) == "1"


class TestPaths:
    def test_single_spectrum_keeps_name(self, tmp_path):
        assert spectrum_path(tmp_path / "s.csv", 7, multiple=False) == tmp_path / "s.csv"

    def test_suffix_per_cell_count(self, tmp_path):
        assert spectrum_path(tmp_path / "s.csv", 7, multiple=True) == tmp_path / "s_N7.csv"

    def test_suffix_per_splitting(self, tmp_path):
        assert spectrum_path(tmp_path / "s.csv", 7, True, 0.25) == tmp_path / "s_dw0p25_N7.csv"
        assert spectrum_path(tmp_path / "s.csv", 1, True, 1.0) == tmp_path / "s_dw1_N1.csv"


class TestJson:
    def test_spectrum_dict(self, spectrum, tmp_path):
        path = write_json(spectrum_to_dict(spectrum), tmp_path / "spectrum.json")
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["params"]["n_cells"] == 1
        assert data["T"][0] is None
        assert data["regime"][0] == "LeadBandEdge"
        assert len(data["omega_minus_omega0_over_gamma"]) == len(spectrum.points)

    def test_numpy_values(self, tmp_path):
        path = write_json({"a": np.float64(1.5), "b": np.arange(3), "c": (Regime.EVANESCENT,)}, tmp_path / "x.json")
        assert json.loads(path.read_text(encoding="utf-8")) == {"a": 1.5, "b": [0, 1, 2], "c": ["Evanescent"]}


class TestPlotScript:
    def test_script_lists_panels(self, tmp_path):
        panels = [("N = 1", tmp_path / "s_N1.csv"), ("N = 7", tmp_path / "s_N7.csv")]
        script = write_plot_script(panels, tmp_path / "s_plot.py", "quantum mirror")
        text = script.read_text(encoding="utf-8")
        compile(text, str(script), "exec")
        assert str(tmp_path / "s_N7.csv") in text
        assert "matplotlib" in text
        assert str(tmp_path / "s_plot.png") in text

    def test_overlay_script_groups_curves(self, tmp_path):
        panels = [
            ("N = 1", [("delta_omega = 0.25", tmp_path / "s_dw0p25_N1.csv"),
                       ("delta_omega = 1", tmp_path / "s_dw1_N1.csv")]),
            ("N = 7", [("delta_omega = 0.25", tmp_path / "s_dw0p25_N7.csv"),
                       ("delta_omega = 1", tmp_path / "s_dw1_N7.csv")]),
        ]
        script = write_overlay_script(panels, tmp_path / "s_plot.py", "central peak")
        text = script.read_text(encoding="utf-8")
        compile(text, str(script), "exec")
        assert str(tmp_path / "s_dw1_N7.csv") in text
        assert "delta_omega = 0.25" in text
