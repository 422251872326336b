"""
Brute-force scattering solvers used to validate the closed-form amplitudes.

Three independent routes to (r, t):
  - the full (3N+2)-unknown system with photon and both atomic amplitudes,
  - the reduced (N+2)-unknown chain with renormalized site energies,
  - a product of 2x2 per-cell transfer matrices.

Boundary rows come from substituting the plane-wave ansatz into the lead
equation at j = 0 and j = N+1, which eliminates u_0 and u_{N+1}.
"""

import math
import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ..errors import LeadBandEdgeError, SingularSystemError
from .model import ModelParams, at_atom_pole, effective_energy, incident_wavenumber

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e14
NORM_LIMIT = 1e300


@dataclass(frozen=True)
class InternalState:
    """Amplitudes of the stationary scattering state inside the doped region."""
    u: np.ndarray
    d_a: np.ndarray
    d_e: np.ndarray
    r: complex
    t: complex

    def consistency_defect(self, energy: float, params: ModelParams) -> float:
        """Largest violation of d = g u / (E - w') over both levels."""
        expected_a = params.g * self.u / (energy - params.omega_a)
        expected_e = params.g * self.u / (energy - params.omega_e)
        return float(max(np.max(np.abs(self.d_a - expected_a)), np.max(np.abs(self.d_e - expected_e))))


@dataclass(frozen=True)
class ReducedSolution:
    r: complex
    t: complex
    u: np.ndarray


@dataclass(frozen=True)
class TransferMatrixResult:
    r: complex
    t: complex
    log_abs_t: float
    determinant: complex


def _check_inputs(energy: float, params: ModelParams) -> float:
    """Return the lead wavenumber; reject band edges and atomic levels."""
    try:
        k = incident_wavenumber(energy, params)
    except LeadBandEdgeError as e:
        raise SingularSystemError(f"band edge hit: {e}") from e
    if at_atom_pole(energy, params):
        raise SingularSystemError(f"atomic pole hit at E={energy!r}")
    return k


def _solve_dense(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """LU with partial pivoting after a condition check."""
    condition = np.linalg.cond(matrix)
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise SingularSystemError(f"matrix condition estimate {condition:.3e} exceeds {CONDITION_LIMIT:.0e}")
    lu, piv = linalg.lu_factor(matrix)
    return linalg.lu_solve((lu, piv), rhs)


def _boundary_rows(matrix: np.ndarray, rhs: np.ndarray, energy: float, k: float, params: ModelParams,
                   first_u: int, last_u: int, r_col: int, t_col: int) -> None:
    """Fill the j=0 and j=N+1 matching rows (first and last row)."""
    v, n = params.v, params.n_cells
    z = np.exp(1j * k)
    detuning = energy - params.omega_c

    # (E - w)(1 + r) = v (u_1 + e^{-ik} + r e^{ik})
    matrix[0, r_col] = detuning - v * z
    matrix[0, first_u] = -v
    rhs[0] = v / z - detuning

    # (E - w) t e^{ik(N+1)} = v (t e^{ik(N+2)} + u_N)
    matrix[-1, t_col] = detuning * z ** (n + 1) - v * z ** (n + 2)
    matrix[-1, last_u] = -v


def solve_full_system(energy: float, params: ModelParams) -> InternalState:
    """
    Solve for u_1..u_N, d_a, d_e, r and t from the full difference equations.

    Raises:
        SingularSystemError: at atomic levels, lead band edges, or when the
            matrix condition estimate exceeds 1e14
    """
    k = _check_inputs(energy, params)
    n, v, g = params.n_cells, params.v, params.g
    size = 3 * n + 2
    u0, a0, e0, r_col, t_col = 0, n, 2 * n, 3 * n, 3 * n + 1
    z = np.exp(1j * k)

    matrix = np.zeros((size, size), dtype=complex)
    rhs = np.zeros(size, dtype=complex)

    # photon rows: rows 1..N
    for j in range(n):
        row = 1 + j
        matrix[row, u0 + j] = energy - params.omega_c
        matrix[row, a0 + j] = -g
        matrix[row, e0 + j] = -g
        if j > 0:
            matrix[row, u0 + j - 1] = -v
        else:
            # u_0 = 1 + r
            matrix[row, r_col] += -v
            rhs[row] += v
        if j < n - 1:
            matrix[row, u0 + j + 1] = -v
        else:
            # u_{N+1} = t e^{ik(N+1)}
            matrix[row, t_col] += -v * z ** (n + 1)

    # atomic rows: rows N+1..3N
    for j in range(n):
        row_a = 1 + n + j
        matrix[row_a, a0 + j] = energy - params.omega_a
        matrix[row_a, u0 + j] = -g
        row_e = 1 + 2 * n + j
        matrix[row_e, e0 + j] = energy - params.omega_e
        matrix[row_e, u0 + j] = -g

    _boundary_rows(matrix, rhs, energy, k, params, u0, u0 + n - 1, r_col, t_col)
    solution = _solve_dense(matrix, rhs)
    return InternalState(
        u=solution[u0:u0 + n],
        d_a=solution[a0:a0 + n],
        d_e=solution[e0:e0 + n],
        r=complex(solution[r_col]),
        t=complex(solution[t_col]),
    )


def solve_reduced_system(energy: float, params: ModelParams) -> ReducedSolution:
    """
    Solve the chain of N sites with renormalized energies for u, r and t.

    Raises:
        SingularSystemError: at atomic levels, lead band edges, or for an
            ill-conditioned matrix
    """
    k = _check_inputs(energy, params)
    n, v = params.n_cells, params.v
    size = n + 2
    r_col, t_col = n, n + 1
    z = np.exp(1j * k)
    diagonal = energy - params.omega_c - effective_energy(energy, params)

    matrix = np.zeros((size, size), dtype=complex)
    rhs = np.zeros(size, dtype=complex)
    for j in range(n):
        row = 1 + j
        matrix[row, j] = diagonal
        if j > 0:
            matrix[row, j - 1] = -v
        else:
            matrix[row, r_col] += -v
            rhs[row] += v
        if j < n - 1:
            matrix[row, j + 1] = -v
        else:
            matrix[row, t_col] += -v * z ** (n + 1)

    _boundary_rows(matrix, rhs, energy, k, params, 0, n - 1, r_col, t_col)
    solution = _solve_dense(matrix, rhs)
    return ReducedSolution(r=complex(solution[r_col]), t=complex(solution[t_col]), u=solution[:n])


def solve_transfer_matrix(energy: float, params: ModelParams) -> TransferMatrixResult:
    """
    (r, t) from the product of N per-cell matrices [[y, -1], [1, 0]],
    y = (E - w - eps~)/v, acting on (u_j, u_{j-1}).

    The running product is rescaled whenever its norm exceeds 1e300 and the
    scale is tracked as a log factor.
    """
    k = _check_inputs(energy, params)
    n = params.n_cells
    y = (energy - params.omega_c - effective_energy(energy, params)) / params.v
    cell = np.array([[y, -1.0], [1.0, 0.0]], dtype=complex)

    product = np.eye(2, dtype=complex)
    log_scale = 0.0
    for _ in range(n):
        product = cell @ product
        norm = np.max(np.abs(product))
        if norm > NORM_LIMIT:
            product /= norm
            log_scale += math.log(norm)
            logger.debug(f"transfer product rescaled, log factor now {log_scale:.3f}")

    # (u_{N+1}, u_N) = P (u_1, u_0), u_1 = z + r/z, u_0 = 1 + r, u_{N+1} = t z^{N+1}, u_N = t z^N.
    # With P = e^{L} P' the unknowns are r and t' = t e^{-L}.
    z = np.exp(1j * k)
    p = product
    system = np.array([
        [p[0, 0] / z + p[0, 1], -z ** (n + 1)],
        [p[1, 0] / z + p[1, 1], -z ** n],
    ])
    rhs = -np.array([p[0, 0] * z + p[0, 1], p[1, 0] * z + p[1, 1]])
    det_system = system[0, 0] * system[1, 1] - system[0, 1] * system[1, 0]
    if det_system == 0 or not np.isfinite(det_system):
        raise SingularSystemError(f"transfer-matrix boundary system is singular at E={energy!r}")
    r = (rhs[0] * system[1, 1] - system[0, 1] * rhs[1]) / det_system

    # Cramer's numerator for t' reduces to det(P') (z - 1/z). Every cell has
    # unit determinant, so det(P') = e^{-2L} and t = e^{-L} (z - 1/z) / det_system;
    # forming the numerator from the entries would cancel terms of size |P'|^2.
    wronskian = z - 1.0 / z
    ratio = wronskian / det_system
    log_abs_t = math.log(abs(ratio)) - log_scale
    t = complex(ratio / abs(ratio) * math.exp(log_abs_t))
    determinant = (p[0, 0] * p[1, 1] - p[0, 1] * p[1, 0]) * math.exp(2.0 * log_scale) \
        if log_scale < 350.0 else complex(math.nan)
    return TransferMatrixResult(r=complex(r), t=complex(t), log_abs_t=log_abs_t, determinant=complex(determinant))
