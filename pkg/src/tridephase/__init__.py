"""Exact dephasing dynamics and multipartite-correlation measures for three
qubits coupled to independent thermal bosonic reservoirs."""

from .analysis import (
    CharacteristicTime,
    GradientSpec,
    MeasureResult,
    SweepGrid,
    SweepResult,
    TimescaleResult,
    characteristic_time,
    freezing_intervals,
    gmc_ghz_werner_low_t,
    make_reservoirs,
    preservation_time_numeric,
    preservation_time_sinh_residual,
    preservation_time_zero_t,
    run_sweep,
)
from .evolution import DephasingFactors, QubitTriple, dephasing_factors, energies, energy, evolve
from .exceptions import (
    HermiticityViolation,
    MethodError,
    NoCorrelationError,
    ParameterError,
    QuadratureError,
    ShapeError,
    TridephaseError,
)
from .linalg import hermitian_eigenvalues, partial_trace, partial_transpose, purity
from .measures import (
    gmc_ghz_werner,
    gmc_pure,
    gmc_x_state,
    l1_coherence,
    negativity,
    tripartite_negativity,
    w_werner_negativity_closed_form,
)
from .reservoir import (
    ZERO_TEMPERATURE,
    CustomSpectralDensity,
    GammaMethod,
    OhmicSpectralDensity,
    ReservoirSpec,
    gamma,
    gamma_low_t,
    gamma_zero_t,
    is_zero_temperature,
)
from .states import ghz_state, maximally_mixed, projector, w_state, werner

__version__ = "0.1.0"

__all__ = [
    "CharacteristicTime",
    "CustomSpectralDensity",
    "DephasingFactors",
    "GammaMethod",
    "GradientSpec",
    "HermiticityViolation",
    "MeasureResult",
    "MethodError",
    "NoCorrelationError",
    "OhmicSpectralDensity",
    "ParameterError",
    "QuadratureError",
    "QubitTriple",
    "ReservoirSpec",
    "ShapeError",
    "SweepGrid",
    "SweepResult",
    "TimescaleResult",
    "TridephaseError",
    "ZERO_TEMPERATURE",
    "characteristic_time",
    "dephasing_factors",
    "energies",
    "energy",
    "evolve",
    "freezing_intervals",
    "gamma",
    "gamma_low_t",
    "gamma_zero_t",
    "ghz_state",
    "gmc_ghz_werner",
    "gmc_ghz_werner_low_t",
    "gmc_pure",
    "gmc_x_state",
    "hermitian_eigenvalues",
    "is_zero_temperature",
    "l1_coherence",
    "make_reservoirs",
    "maximally_mixed",
    "negativity",
    "partial_trace",
    "partial_transpose",
    "preservation_time_numeric",
    "preservation_time_sinh_residual",
    "preservation_time_zero_t",
    "projector",
    "purity",
    "run_sweep",
    "tripartite_negativity",
    "w_state",
    "w_werner_negativity_closed_form",
    "werner",
]
