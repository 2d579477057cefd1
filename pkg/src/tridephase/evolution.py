"""Exact elementwise dephasing map for three qubits in independent baths.

The interaction commutes with the free Hamiltonian, so populations never
move; every coherence picks up a damping factor and a deterministic phase:

    rho[u, v](t) = rho[u, v](0) * F[u, v](t) * exp(-i (E_u - E_v) t)

with F[u, v] = exp(-(1 - delta_mm') Gamma_A - (1 - delta_nn') Gamma_B
               - (1 - delta_ll') Gamma_C) for u = (m n l), v = (m' n' l').
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import ParameterError
from .reservoir import GammaMethod, ReservoirSpec, gamma
from .states import assert_density_matrix

DIM = 8


@dataclass(frozen=True)
class QubitTriple:
    """Level splittings Omega_A, Omega_B, Omega_C (inverse time)."""

    omega_a: float
    omega_b: float
    omega_c: float

    def __post_init__(self):
        for name, value in (("omega_a", self.omega_a), ("omega_b", self.omega_b), ("omega_c", self.omega_c)):
            if value <= 0:
                raise ParameterError(f"{name} must be positive, got {value!r}")


def energy(m: int, n: int, l: int, q: QubitTriple) -> float:
    """E_mnl = (-1)^m Omega_A + (-1)^n Omega_B + (-1)^l Omega_C."""
    for bit in (m, n, l):
        if bit not in (0, 1):
            raise ParameterError(f"basis labels must be bits, got ({m}, {n}, {l})")
    return (-1.0) ** m * q.omega_a + (-1.0) ** n * q.omega_b + (-1.0) ** l * q.omega_c


def energies(q: QubitTriple) -> np.ndarray:
    """All eight E_mnl ordered by basis index 4m + 2n + l."""
    return np.array(
        [energy(m, n, l, q) for m in (0, 1) for n in (0, 1) for l in (0, 1)], dtype=float
    )


@dataclass(frozen=True)
class DephasingFactors:
    """Elementwise damping magnitudes and phase angles at one fixed time."""

    damping: np.ndarray
    phase: np.ndarray

    def __post_init__(self):
        if self.damping.shape != (DIM, DIM) or self.phase.shape != (DIM, DIM):
            raise ParameterError("damping and phase must be 8x8")
        if not np.array_equal(np.diag(self.damping), np.ones(DIM)):
            raise ParameterError("damping diagonal must be exactly 1")
        # exp(-Gamma) underflows to 0.0 for Gamma > ~745, so 0 is admissible
        if np.any(self.damping < 0) or np.any(self.damping > 1):
            raise ParameterError("damping entries must lie in [0, 1]")
        if not np.array_equal(self.damping, self.damping.T):
            raise ParameterError("damping must be symmetric")
        if not np.array_equal(self.phase, -self.phase.T):
            raise ParameterError("phase must be antisymmetric")


def dephasing_factors(
    q: QubitTriple,
    reservoirs: Sequence[ReservoirSpec],
    t: float,
    method: GammaMethod,
) -> DephasingFactors:
    """Damping and phase matrices at time t for three independent reservoirs."""
    if len(reservoirs) != 3:
        raise ParameterError(f"expected three reservoirs, got {len(reservoirs)}")
    for splitting, res, label in zip(
        (q.omega_a, q.omega_b, q.omega_c), reservoirs, "ABC"
    ):
        if splitting != res.omega_qubit:
            raise ParameterError(
                f"qubit {label} splitting {splitting!r} does not match its reservoir's "
                f"omega_qubit {res.omega_qubit!r}"
            )
    blocks = []
    for res in reservoirs:
        damp = math.exp(-gamma(res, t, method))
        blocks.append(np.array([[1.0, damp], [damp, 1.0]]))
    damping = np.kron(np.kron(blocks[0], blocks[1]), blocks[2])
    e = energies(q)
    phase = -(e[:, None] - e[None, :]) * t
    return DephasingFactors(damping=damping, phase=phase)


def evolve(rho0: np.ndarray, factors: DephasingFactors) -> np.ndarray:
    """Apply the dephasing map; the diagonal is returned bit-for-bit unchanged."""
    rho = assert_density_matrix(rho0)
    return rho * factors.damping * np.exp(1j * factors.phase)
