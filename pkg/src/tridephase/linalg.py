"""Dense complex-matrix primitives for small multi-qubit systems."""

from __future__ import annotations

import math

import numpy as np

from .exceptions import HermiticityViolation, ParameterError, ShapeError

HERMITICITY_TOL = 1e-10


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    return a


def hermiticity_defect(m) -> float:
    """max |M[i,j] - conj(M[j,i])| over all entries."""
    a = _as_square(m)
    return float(np.abs(a - a.conj().T).max())


def hermitian_eigenvalues(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, ascending and real.

    The input is symmetrized ((M + M^dagger)/2) before solving so that
    ~1e-16 asymmetries from upstream arithmetic cannot leak into the
    spectrum; anything beyond `tol` from Hermitian is rejected.
    """
    a = _as_square(m)
    defect = float(np.abs(a - a.conj().T).max())
    if defect > tol:
        raise HermiticityViolation(
            f"matrix is not Hermitian: max |M - M^dagger| = {defect:.3e} > {tol:.1e}"
        )
    return np.linalg.eigvalsh((a + a.conj().T) / 2.0)


def partial_transpose(rho, dims, subsystem: int) -> np.ndarray:
    """Transpose the indices of one subsystem of a composite-system matrix.

    `dims` lists the subsystem dimensions in tensor order (most significant
    first); their product must equal the matrix dimension.
    """
    a = _as_square(rho)
    dims = [int(d) for d in dims]
    if math.prod(dims) != a.shape[0]:
        raise ShapeError(
            f"subsystem dimensions {dims} do not factor a {a.shape[0]}-dimensional matrix"
        )
    if not 0 <= subsystem < len(dims):
        raise ShapeError(f"subsystem index {subsystem} out of range for {len(dims)} subsystems")
    n = len(dims)
    t = a.reshape(dims + dims)
    t = t.swapaxes(subsystem, n + subsystem)
    return np.ascontiguousarray(t.reshape(a.shape))


def partial_trace(rho, dims, keep) -> np.ndarray:
    """Trace out every subsystem not listed in `keep`.

    The reduced matrix keeps the surviving subsystems in their original
    tensor order.
    """
    a = _as_square(rho)
    dims = [int(d) for d in dims]
    if math.prod(dims) != a.shape[0]:
        raise ShapeError(
            f"subsystem dimensions {dims} do not factor a {a.shape[0]}-dimensional matrix"
        )
    keep_set = set(int(k) for k in keep)
    if not keep_set:
        raise ShapeError("must keep at least one subsystem")
    if not keep_set <= set(range(len(dims))):
        raise ShapeError(f"keep indices {sorted(keep_set)} out of range for {len(dims)} subsystems")

    t = a.reshape(dims + dims)
    n_left = len(dims)
    # Trace from the highest index down so the positions of the remaining
    # lower-index subsystems stay put.
    for idx in range(len(dims) - 1, -1, -1):
        if idx in keep_set:
            continue
        t = np.trace(t, axis1=idx, axis2=n_left + idx)
        n_left -= 1
    d_red = math.prod(dims[i] for i in sorted(keep_set))
    return np.ascontiguousarray(t.reshape(d_red, d_red))


def purity(rho, tol: float = HERMITICITY_TOL) -> float:
    """trace(rho^2) for a Hermitian, unit-trace matrix."""
    a = _as_square(rho)
    defect = float(np.abs(a - a.conj().T).max())
    if defect > tol:
        raise HermiticityViolation(
            f"matrix is not Hermitian: max |M - M^dagger| = {defect:.3e} > {tol:.1e}"
        )
    tr = complex(np.trace(a))
    if abs(tr - 1.0) > tol:
        raise ParameterError(f"expected unit trace, got {tr!r}")
    return float(np.real(np.trace(a @ a)))
