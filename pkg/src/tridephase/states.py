"""Initial three-qubit states: GHZ, W, and their Werner mixtures.

Basis order is |mnl> -> 4m + 2n + l with qubit A most significant.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ParameterError
from .linalg import hermitian_eigenvalues, hermiticity_defect

DIM = 8

NORM_TOL = 1e-12
TRACE_TOL = 1e-12
HERM_TOL = 1e-10
PSD_TOL = 1e-10


def ghz_state() -> np.ndarray:
    """(|000> + |111>)/sqrt(2)."""
    psi = np.zeros(DIM, dtype=complex)
    psi[0] = psi[7] = 1.0 / np.sqrt(2.0)
    return psi


def w_state() -> np.ndarray:
    """(|001> + |010> + |100>)/sqrt(3)."""
    psi = np.zeros(DIM, dtype=complex)
    psi[1] = psi[2] = psi[4] = 1.0 / np.sqrt(3.0)
    return psi


def projector(psi) -> np.ndarray:
    """|psi><psi| for a normalized pure state."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    norm_sq = float(np.vdot(v, v).real)
    if abs(norm_sq - 1.0) > NORM_TOL:
        raise ParameterError(f"pure state is not normalized: |psi|^2 = {norm_sq!r}")
    return np.outer(v, v.conj())


def maximally_mixed(dim: int = DIM) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def werner(psi, x: float) -> np.ndarray:
    """x |psi><psi| + (1 - x) I/8, with mixing parameter x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"mixing parameter must lie in [0, 1], got {x!r}")
    p = projector(psi)
    if p.shape != (DIM, DIM):
        raise ParameterError(f"expected an 8-amplitude pure state, got dimension {p.shape[0]}")
    return x * p + (1.0 - x) / DIM * np.eye(DIM, dtype=complex)


def assert_density_matrix(rho) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; returns the array."""
    a = np.asarray(rho, dtype=complex)
    if a.shape != (DIM, DIM):
        raise ParameterError(f"expected an {DIM}x{DIM} density matrix, got shape {a.shape}")
    defect = hermiticity_defect(a)
    if defect > HERM_TOL:
        raise ParameterError(f"density matrix is not Hermitian (defect {defect:.3e})")
    tr = complex(np.trace(a))
    if abs(tr - 1.0) > TRACE_TOL:
        raise ParameterError(f"density matrix trace is {tr!r}, expected 1")
    min_eig = float(hermitian_eigenvalues(a)[0])
    if min_eig < -PSD_TOL:
        raise ParameterError(f"density matrix has negative eigenvalue {min_eig:.3e}")
    return a


def is_density_matrix(rho) -> bool:
    try:
        assert_density_matrix(rho)
    except ParameterError:
        return False
    return True
