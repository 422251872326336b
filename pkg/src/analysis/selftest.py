"""
Randomized verification suites: three-solver agreement and unitarity.
"""

import math
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from tqdm import tqdm

from ..errors import SingularSystemError
from ..physics.model import ModelParams, classify
from ..physics.oracle import solve_full_system, solve_reduced_system, solve_transfer_matrix
from ..physics.scattering import scatter_many, transmission_amplitude
from ..utils.progress_tracker import DrawRecord, ProgressTracker

logger = logging.getLogger(__name__)

AGREEMENT_TOLERANCE = 1e-10
UNITARITY_TOLERANCE = 1e-12
# draws keep this distance (in units of v) from the atomic levels
POLE_MARGIN = 1e-2
# lead wavenumbers are drawn from [K_MARGIN, pi - K_MARGIN]
K_MARGIN = 0.02


@dataclass
class SelftestSettings:
    seed: int = 0
    agreement_draws: int = 1000
    unitarity_blocks: int = 100
    unitarity_points_per_block: int = 1000
    max_cells: int = 10
    inject_fault: bool = False
    show_progress: bool = True


def draw_params(rng: np.random.Generator, max_cells: int = 10) -> ModelParams:
    """N <= max_cells, g/v in [0, 2], dw/gamma in [0, 3], v = 1."""
    v = 1.0
    g = rng.uniform(0.0, 2.0) * v
    gamma_value = g ** 2 / (2.0 * v)
    omega_c = rng.uniform(-1.0, 1.0)
    return ModelParams(
        omega_c=omega_c,
        v=v,
        g=g,
        omega0=omega_c + rng.uniform(-1.0, 1.0) * v,
        delta_omega=rng.uniform(0.0, 3.0) * gamma_value,
        n_cells=int(rng.integers(1, max_cells + 1)),
    )


def draw_energy(rng: np.random.Generator, params: ModelParams, attempts: int = 100) -> Optional[float]:
    """A lead-band energy at least POLE_MARGIN*v away from both atomic levels."""
    for _ in range(attempts):
        k = rng.uniform(K_MARGIN, math.pi - K_MARGIN)
        energy = params.omega_c + 2.0 * params.v * math.cos(k)
        if params.g == 0 or min(abs(energy - params.omega_a), abs(energy - params.omega_e)) > POLE_MARGIN * params.v:
            return energy
    return None


def compare_solvers(energy: float, params: ModelParams, fault: float = 0.0) -> float:
    """
    Largest pairwise |dt|, |dr| between analytic, full, reduced and
    transfer-matrix amplitudes.

    Raises:
        SingularSystemError: when any brute-force solve is declared singular
    """
    analytic = transmission_amplitude(classify(energy, params), params)
    full = solve_full_system(energy, params)
    reduced = solve_reduced_system(energy, params)
    transfer = solve_transfer_matrix(energy, params)

    candidates = [
        (analytic.r, analytic.t + fault),
        (full.r, full.t),
        (reduced.r, reduced.t),
        (transfer.r, transfer.t),
    ]
    worst = 0.0
    for i in range(len(candidates)):
        for j in range(i + 1, len(candidates)):
            worst = max(worst, abs(candidates[i][0] - candidates[j][0]), abs(candidates[i][1] - candidates[j][1]))
    return worst


def run_agreement_suite(settings: SelftestSettings, tracker: ProgressTracker,
                        rng: np.random.Generator) -> None:
    suite = "three_solver_agreement"
    tracker.add_suite(suite)
    fault = 1e-6 if settings.inject_fault else 0.0
    checked, index = 0, -1
    progress = tqdm(total=settings.agreement_draws, desc="solver agreement", disable=not settings.show_progress)
    # skipped draws do not count towards the target
    while checked < settings.agreement_draws and index < 3 * settings.agreement_draws:
        index += 1
        params = draw_params(rng, settings.max_cells)
        energy = draw_energy(rng, params)
        record = DrawRecord(suite=suite, index=index, params=params.as_dict(), energy=energy)
        if energy is None:
            record.status, record.message = "skipped", "no energy clear of the atomic levels"
            tracker.record(record)
            continue
        try:
            deviation = compare_solvers(energy, params, fault)
        except SingularSystemError as e:
            record.status, record.message = "skipped", str(e)
            logger.debug(f"Draw {index} skipped: {e}")
            tracker.record(record)
            continue
        record.max_deviation = deviation
        if deviation <= AGREEMENT_TOLERANCE:
            record.status = "passed"
        else:
            record.status = "failed"
            record.message = f"max pairwise deviation {deviation:.3e} > {AGREEMENT_TOLERANCE:.0e}"
            logger.warning(f"Draw {index} failed: {record.message}; params={record.params}, E={energy!r}")
        tracker.record(record)
        checked += 1
        progress.update(1)
    progress.close()


def run_unitarity_suite(settings: SelftestSettings, tracker: ProgressTracker,
                        rng: np.random.Generator) -> None:
    suite = "unitarity"
    tracker.add_suite(suite)
    for index in tqdm(range(settings.unitarity_blocks), desc="unitarity",
                      disable=not settings.show_progress):
        params = draw_params(rng, settings.max_cells)
        k = rng.uniform(K_MARGIN, math.pi - K_MARGIN, settings.unitarity_points_per_block)
        energies = params.omega_c + 2.0 * params.v * np.cos(k)
        result = scatter_many(energies, params)
        mask = result.codes <= 1
        defect = float(np.max(np.abs(result.big_r[mask] + result.big_t[mask] - 1.0))) if mask.any() else 0.0
        if settings.inject_fault:
            defect += 1e-6
        record = DrawRecord(suite=suite, index=index, params=params.as_dict(), max_deviation=defect)
        if defect <= UNITARITY_TOLERANCE:
            record.status = "passed"
        else:
            worst = int(np.argmax(np.where(mask, np.abs(result.big_r + result.big_t - 1.0), -1.0)))
            record.status = "failed"
            record.energy = float(energies[worst])
            record.message = f"|R + T - 1| = {defect:.3e} > {UNITARITY_TOLERANCE:.0e}"
            logger.warning(f"Unitarity block {index} failed: {record.message}; params={record.params}")
        tracker.record(record)


def run_selftest(settings: SelftestSettings, tracker: Optional[ProgressTracker] = None) -> ProgressTracker:
    """Run both suites from one seeded generator; identical seeds give identical draws."""
    tracker = tracker or ProgressTracker()
    rng = np.random.default_rng(settings.seed)
    logger.info(f"Selftest seed={settings.seed}, {settings.agreement_draws} agreement draws, "
                f"{settings.unitarity_blocks}x{settings.unitarity_points_per_block} unitarity points")
    run_agreement_suite(settings, tracker, rng)
    run_unitarity_suite(settings, tracker, rng)
    return tracker
