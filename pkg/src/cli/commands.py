"""
Command implementations behind ``main.py``.

Each command takes a validated ``RunConfig`` and returns an exit status;
configuration, I/O and domain errors propagate to the entry point, which maps
them onto exit codes with :func:`exit_code_for`.
"""

import logging
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from ..errors import ConfigurationError, DomainError, SingularSystemError
from ..analysis.bands import (
    Feature,
    band_edges_vs_detuning,
    calibrate_semi_width,
    dicke_scaling,
    find_band_edges,
    gap_attenuation,
    half_maximum_crossings,
    probe_decay_rate,
)
from ..analysis.selftest import POLE_MARGIN, SelftestSettings, compare_solvers, run_selftest
from ..analysis.spectrum import Spectrum, sweep, uniform_grid
from ..physics.line_shapes import SEMI_WIDTH_OVER_GAMMA, dicke_nominal_width
from ..physics.model import ModelParams, Regime, classify
from ..utils.config_manager import RunConfig
from ..utils.progress_tracker import ProgressTracker
from .output import (
    spectrum_path,
    spectrum_to_dict,
    write_json,
    write_overlay_script,
    write_plot_script,
    write_spectrum_csv,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3
EXIT_DOMAIN_ERROR = 4
EXIT_UNEXPECTED = 5


def exit_code_for(error: BaseException) -> int:
    """Stable exit code for an exception escaping a command."""
    if isinstance(error, ConfigurationError):
        return EXIT_CONFIG_ERROR
    if isinstance(error, OSError):
        return EXIT_IO_ERROR
    if isinstance(error, DomainError):
        return EXIT_DOMAIN_ERROR
    return EXIT_UNEXPECTED


def _relative(energy: float, params: ModelParams) -> float:
    """Absolute energy to E - w0 in units of gamma_ref (raw model units)."""
    return energy - params.omega0


def build_spectra(run: RunConfig) -> List[Spectrum]:
    """
    One spectrum per configured (delta_omega, N) pair on the configured
    detuning grid, splittings outermost.

    Raises:
        DomainError: when every grid point lies outside the lead band
    """
    grid = uniform_grid(run.grid.min, run.grid.max, run.grid.count)
    spectra = []
    for delta_omega in run.model.detunings or [run.model.delta_omega]:
        for n in run.model.n_cells:
            params = run.model.params(n, delta_omega)
            spectrum = sweep(params, grid, energy_unit=1.0, max_workers=run.max_workers, chunk_size=run.chunk_size)
            if spectrum.count(Regime.LEAD_BAND_EDGE) == len(spectrum.points):
                raise DomainError(f"every point of grid [{run.grid.min}, {run.grid.max}] lies outside the lead band "
                                  f"|E - omega_c| < 2v = {2 * params.v:g}")
            spectrum.metadata['v_over_gamma_ref'] = run.model.v_over_gamma
            spectrum.metadata['delta_omega_ref'] = delta_omega
            spectra.append(spectrum)
    return spectra


def _gap_summary(params: ModelParams) -> str:
    try:
        report = find_band_edges(params)
    except DomainError as e:
        return f"no gap ({e})"
    lo, hi = (_relative(e, params) for e in report.gap_edges)
    return f"gap edges ({lo:.6g}, {hi:.6g})"


def cmd_spectrum(run: RunConfig) -> int:
    """
    Sweep every configured (delta_omega, N), write the spectra and print a
    summary line for each.

    With several splittings the plot script overlays their transmission in
    one panel per N.
    """
    spectra = build_spectra(run)
    overlay = len(run.model.detunings) > 1
    multiple = len(spectra) > 1
    base = Path(run.output.path)
    if run.output.format == 'json':
        base = base.with_suffix('.json')

    panels = []
    curves: Dict[int, List[tuple]] = {}
    for spectrum in spectra:
        n = spectrum.params.n_cells
        delta_omega = spectrum.metadata['delta_omega_ref']
        path = spectrum_path(base, n, multiple, delta_omega if overlay else None)
        if run.output.format == 'csv':
            write_spectrum_csv(spectrum, path)
        else:
            write_json(spectrum_to_dict(spectrum), path)
        panels.append((f"N = {n}", path))
        curves.setdefault(n, []).append((f"delta_omega = {delta_omega:g}", path))

        big_t = spectrum.transmission()
        prefix = f"dw={delta_omega:g} " if overlay else ""
        print(f"{prefix}N={n}: min T={np.nanmin(big_t):.6g}, max T={np.nanmax(big_t):.6g}, "
              f"{_gap_summary(spectrum.params)} -> {path}")

    if run.output.format == 'csv' and run.output.emit_plot_script:
        model = run.model
        script = base.with_name(base.stem + "_plot.py")
        if overlay:
            title = f"v/gamma = {model.v_over_gamma:g}, transmission vs delta_omega/gamma"
            write_overlay_script([(f"N = {n}", paths) for n, paths in curves.items()], script, title)
        else:
            title = f"v/gamma = {model.v_over_gamma:g}, delta_omega/gamma = {model.delta_omega:g}"
            write_plot_script(panels, script, title)

    logger.info(f"Spectrum command finished for N={run.model.n_cells}, delta_omega={run.model.detunings}")
    return EXIT_OK


def _section(name: str, compute) -> Dict[str, Any]:
    """Run one report section; a domain error is recorded instead of aborting the report."""
    try:
        return compute()
    except DomainError as e:
        logger.info(f"Report section {name}: {type(e).__name__}: {e}")
        return {'absent': type(e).__name__, 'reason': str(e)}


def _band_section(params: ModelParams, dicke: Dict[str, Any], attenuation: Dict[str, Any]) -> Dict[str, Any]:
    """Gap geometry with the BandReport width and attenuation fields taken from the other sections."""
    derived = {
        'dicke_halfwidth': dicke.get('measured_width'),
        'dicke_nominal': dicke.get('nominal_width'),
        'attenuation_slope': attenuation.get('slope'),
        'kappa_reference': attenuation.get('kappa'),
    }
    try:
        report = find_band_edges(params)
    except DomainError as e:
        return dict(derived, no_gap=True, reason=str(e))
    derived['dicke_nominal'] = dicke_nominal_width(params)
    data = replace(report, **derived).to_dict()
    data['no_gap'] = False
    data['gap_edges_relative'] = [_relative(e, params) for e in report.gap_edges]
    data['mirror_edges_relative'] = [_relative(e, params) for e in report.mirror_edges]
    data['nominal_gap_relative'] = [_relative(e, params) for e in report.nominal_gap]
    if report.corrected_gap is not None:
        data['corrected_gap_relative'] = [_relative(e, params) for e in report.corrected_gap]
    return data


def _dicke_section(params: ModelParams, feature: Feature) -> Dict[str, Any]:
    half = half_maximum_crossings(params, feature)
    measured = half.semi_width
    nominal = dicke_nominal_width(params)
    return {
        'feature': feature.value,
        'measured_width': measured,
        'lower_width': half.lower_width,
        'upper_width': half.upper_width,
        'half_maximum_level': half.level,
        'nominal_width': nominal,
        'ratio': measured / nominal if nominal > 0 else None,
    }


def _attenuation_section(params: ModelParams, probe_detuning: float, n_range: List[int]) -> Dict[str, Any]:
    probe = params.omega0 + probe_detuning
    cells = list(range(n_range[0], n_range[1] + 1))
    slope = gap_attenuation(params, probe, cells)
    kappa = probe_decay_rate(params, probe)
    return {
        'probe_detuning': probe_detuning,
        'n_cells': cells,
        'slope': slope,
        'kappa': kappa,
        'expected_slope': -2.0 * kappa,
        'ratio': slope / (-2.0 * kappa),
    }


def _calibration_section(params: ModelParams) -> Dict[str, Any]:
    measured = calibrate_semi_width(params)
    gamma_value = params.gamma()
    return {
        'measured_semi_width': measured,
        'gamma': gamma_value,
        'measured_over_gamma': measured / gamma_value,
        'wide_band_over_gamma': SEMI_WIDTH_OVER_GAMMA,
    }


def _dicke_scaling_section(params: ModelParams, detunings: List[float]) -> Dict[str, Any]:
    scaling = dicke_scaling(params, detunings)
    return {
        'detunings': scaling.detunings,
        'widths': scaling.widths,
        'exponent': scaling.exponent,
        'prefactor': scaling.prefactor,
        'nominal_prefactor': scaling.nominal_prefactor,
    }


def oracle_deviation(params: ModelParams, grid: np.ndarray, points: int) -> Dict[str, Any]:
    """Worst disagreement between analytic and brute-force amplitudes on a subsample of the grid."""
    if points <= 0:
        return {'points': 0, 'max_deviation': None}
    energies = params.omega0 + np.linspace(grid[0], grid[-1], points)
    worst, checked, skipped = 0.0, 0, 0
    for energy in energies:
        point = classify(float(energy), params)
        near_pole = params.g > 0 and min(abs(energy - params.omega_a),
                                         abs(energy - params.omega_e)) <= POLE_MARGIN * params.v
        if not point.regime.is_scattering or near_pole:
            skipped += 1
            continue
        try:
            worst = max(worst, compare_solvers(float(energy), params))
            checked += 1
        except SingularSystemError as e:
            logger.debug(f"Oracle comparison skipped at E={energy!r}: {e}")
            skipped += 1
    return {'points': checked, 'skipped': skipped, 'max_deviation': worst if checked else None}


def build_report(run: RunConfig) -> Dict[str, Any]:
    """Aggregate band geometry and derived widths for the first configured N."""
    params = run.model.params()
    analysis = run.analysis
    grid = uniform_grid(run.grid.min, run.grid.max, run.grid.count)
    feature = Feature(analysis.feature)
    dicke = _section('dicke', lambda: _dicke_section(params, feature))
    attenuation = _section('attenuation',
                           lambda: _attenuation_section(params, analysis.probe_detuning, analysis.n_range))

    report: Dict[str, Any] = {
        'params': params.as_dict(),
        'v_over_gamma_ref': run.model.v_over_gamma,
        'energy_unit': 'gamma_ref',
        'band': _band_section(params, dicke, attenuation),
        'dicke': dicke,
        'attenuation': attenuation,
        'semi_width_calibration': _section('semi_width_calibration', lambda: _calibration_section(params)),
        'oracle': oracle_deviation(params, grid, analysis.oracle_points),
    }
    if len(analysis.dicke_detunings) >= 2 and all(d > 0 for d in analysis.dicke_detunings):
        report['dicke_scaling'] = _section('dicke_scaling',
                                           lambda: _dicke_scaling_section(params, analysis.dicke_detunings))
    if analysis.edge_detunings:
        report['edges_vs_detuning'] = band_edges_vs_detuning(params, analysis.edge_detunings)
    return report


def _report_summary(report: Dict[str, Any]) -> str:
    parts = []
    band = report['band']
    if band.get('no_gap'):
        parts.append("NoGap")
    else:
        lo, hi = band['gap_edges_relative']
        parts.append(f"gap ({lo:.6g}, {hi:.6g})")
    ratio = report['dicke'].get('ratio')
    if ratio is not None:
        parts.append(f"Dicke width ratio {ratio:.4f}")
    att = report['attenuation'].get('ratio')
    if att is not None:
        parts.append(f"attenuation slope/(-2 kappa) {att:.4f}")
    deviation = report['oracle'].get('max_deviation')
    if deviation is not None:
        parts.append(f"oracle max deviation {deviation:.3e}")
    return ", ".join(parts)


def cmd_report(run: RunConfig) -> int:
    report = build_report(run)
    path = Path(run.output.path).with_suffix('.json')
    write_json(report, path)
    print(f"{_report_summary(report)} -> {path}")
    return EXIT_OK


def cmd_selftest(run: RunConfig, inject_fault: bool = False, show_progress: bool = True,
                 tracker: Optional[ProgressTracker] = None) -> int:
    """Randomized agreement and unitarity suites; exit 0 iff every check passes."""
    settings = SelftestSettings(
        seed=run.seed,
        agreement_draws=run.selftest.draws,
        unitarity_blocks=run.selftest.unitarity_blocks,
        unitarity_points_per_block=run.selftest.points_per_block,
        max_cells=run.selftest.max_cells,
        inject_fault=inject_fault,
        show_progress=show_progress,
    )
    tracker = tracker or ProgressTracker(failure_file=run.selftest.failure_file)
    run_selftest(settings, tracker)
    tracker.print_statistics()

    if tracker.all_passed():
        print(f"SELFTEST PASSED (seed {run.seed})")
        return EXIT_OK

    for failure in tracker.failures():
        energy = "-" if failure.energy is None else repr(failure.energy)
        print(f"FAILED {failure.suite}#{failure.index}: E={energy} params={failure.params} {failure.message}")
    tracker.save_failures()
    print(f"SELFTEST FAILED (seed {run.seed}); rerun with --seed {run.seed} to reproduce")
    return EXIT_SELFTEST_FAILED
