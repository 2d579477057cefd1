"""Correlation quantifiers for three-qubit density matrices.

Implemented measures: genuine multipartite concurrence (pure-state and
X-state forms plus the GHZ-Werner scalar form), bipartition and tripartite
negativity, and l1-norm coherence.  All of them are insensitive to the
deterministic phases the dephasing map attaches to coherences.
"""

from __future__ import annotations

import math

import numpy as np

from .exceptions import ParameterError, ShapeError
from .linalg import hermitian_eigenvalues, partial_trace, partial_transpose, purity
from .states import assert_density_matrix, projector

DIM = 8
QUBIT_DIMS = [2, 2, 2]

# Eigenvalues and matrix entries below this magnitude count as zero.
ZERO_EIGENVALUE_TOL = 1e-12
X_SHAPE_TOL = 1e-12


def gmc_pure(psi) -> float:
    """Genuine multipartite concurrence of a pure three-qubit state.

    min over the single-qubit cuts of sqrt(2 (1 - purity of the reduced
    one-qubit state)); zero exactly when the state is product across some
    cut.
    """
    rho = projector(psi)
    best = None
    for cut in range(3):
        reduced = partial_trace(rho, QUBIT_DIMS, keep={cut})
        value = math.sqrt(max(0.0, 2.0 * (1.0 - purity(reduced))))
        best = value if best is None else min(best, value)
    return best


def _assert_x_shaped(rho: np.ndarray) -> None:
    worst = 0.0
    worst_idx = None
    for i in range(DIM):
        for j in range(DIM):
            if i == j or i + j == DIM - 1:
                continue
            mag = abs(rho[i, j])
            if mag > worst:
                worst, worst_idx = mag, (i, j)
    if worst >= X_SHAPE_TOL:
        raise ShapeError(
            f"matrix is not X-shaped: element {worst_idx} has modulus {worst:.3e}"
        )


def gmc_x_state(rho) -> float:
    """Closed-form genuine multipartite concurrence for an X-shaped state.

    2 max_j max{0, |rho[j, 7-j]| - sum_{k != j} sqrt(rho[k, k] rho[7-k, 7-k])}
    over the four anti-diagonal pairs.
    """
    a = assert_density_matrix(rho)
    _assert_x_shaped(a)
    diag = np.real(np.diag(a))
    best = 0.0
    for j in range(4):
        off = abs(a[j, DIM - 1 - j])
        cross = sum(
            math.sqrt(max(0.0, diag[k] * diag[DIM - 1 - k])) for k in range(4) if k != j
        )
        best = max(best, off - cross)
    return 2.0 * max(0.0, best)


def gmc_ghz_werner(x: float, gamma_total: float) -> float:
    """Scalar GMC for the dephased GHZ-Werner family.

    max{0, x exp(-(Gamma_A + Gamma_B + Gamma_C)) - 3(1 - x)/4}; positive at
    t = 0 exactly when x > 3/7.
    """
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"mixing parameter must lie in [0, 1], got {x!r}")
    if gamma_total < 0.0:
        raise ParameterError(f"total decoherence exponent must be >= 0, got {gamma_total!r}")
    return max(0.0, x * math.exp(-gamma_total) - 0.75 * (1.0 - x))


def negativity(rho, subsystem: int) -> float:
    """-2 times the sum of negative partial-transpose eigenvalues.

    Eigenvalues with magnitude below 1e-12 are treated as zero, so a PPT
    state returns exactly 0.0.
    """
    a = assert_density_matrix(rho)
    transposed = partial_transpose(a, QUBIT_DIMS, subsystem)
    eigs = hermitian_eigenvalues(transposed)
    negative = eigs[eigs < -ZERO_EIGENVALUE_TOL]
    if negative.size == 0:
        return 0.0
    return -2.0 * float(negative.sum())


def tripartite_negativity(rho) -> float:
    """Geometric mean of the three bipartition negativities."""
    factors = [negativity(rho, subsystem) for subsystem in range(3)]
    if any(f == 0.0 for f in factors):
        return 0.0
    return float(np.cbrt(factors[0] * factors[1] * factors[2]))


def l1_coherence(rho) -> float:
    """Sum of the moduli of all off-diagonal elements."""
    a = assert_density_matrix(rho)
    mags = np.abs(a)
    return float(mags.sum() - np.trace(mags))


def w_werner_negativity_closed_form(x: float, gamma: float, gamma_c: float):
    """Closed-form candidates for the three W-Werner bipartition negativities.

    Assumes Gamma_A = Gamma_B = `gamma`.  Provided as a flagged cross-check
    only: the outer (A|BC, C|AB) lines reproduce the numeric
    partial-transpose negativity, but the middle (B|AC) radical expression
    mixes scales and does not, so the numeric route stays authoritative.
    """
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"mixing parameter must lie in [0, 1], got {x!r}")
    eg = math.exp(-gamma)
    egc = math.exp(-gamma_c)
    n_a_bc = 2.0 * max(0.0, (x * eg / 3.0) * math.sqrt(egc * egc + eg * eg) - (1.0 - x) / 8.0)
    m = x * math.exp(-(gamma_c + gamma)) / 3.0
    n = x * math.exp(-2.0 * gamma) / 3.0
    radical = math.sqrt(
        36.0 * m * m * n * n + 4.0 * m * m * x * x + 9.0 * n * n + n * n / 2.0 + x * x / 36.0
    )
    n_b_ac = 2.0 * max(0.0, x * x * math.exp(-2.0 * (gamma + gamma_c)) / 9.0 - radical - (x + 3.0) / 24.0)
    n_c_ab = 2.0 * max(0.0, math.sqrt(2.0) * x * math.exp(-(gamma + gamma_c)) / 3.0 - (1.0 - x) / 8.0)
    return n_a_bc, n_b_ac, n_c_ab
