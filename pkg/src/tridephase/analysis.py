"""Derived time scales and batch parameter sweeps.

Preservation time t_p is the last time a correlation measure stays above
the dead threshold (1e-12); characteristic time T_c is the end of the
initial plateau (first drop of a fraction epsilon below the starting
value).  Sweeps evaluate the matrix pipeline over a Cartesian parameter
grid and are bitwise deterministic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .exceptions import NoCorrelationError, ParameterError
from .evolution import QubitTriple, dephasing_factors, evolve
from .measures import (
    gmc_x_state,
    l1_coherence,
    negativity,
    tripartite_negativity,
)
from .reservoir import (
    ZERO_TEMPERATURE,
    GammaMethod,
    OhmicSpectralDensity,
    ReservoirSpec,
    is_zero_temperature,
)
from .states import ghz_state, w_state, werner

DEAD_THRESHOLD = 1e-12
ROOT_REL_TOL = 1e-9
DEFAULT_EPSILON = 0.01

MEASURES: dict[str, Callable[[np.ndarray], float]] = {
    "gmc": gmc_x_state,
    "tripartite_negativity": tripartite_negativity,
    "negativity_a_bc": lambda rho: negativity(rho, 0),
    "negativity_b_ac": lambda rho: negativity(rho, 1),
    "negativity_c_ab": lambda rho: negativity(rho, 2),
    "l1_coherence": l1_coherence,
}

STATES: dict[str, Callable[[], np.ndarray]] = {
    "ghz": ghz_state,
    "w": w_state,
}


@dataclass(frozen=True)
class GradientSpec:
    """Reservoir temperatures via beta_B = k1 beta_A, beta_C = k2 beta_A."""

    beta_a: float
    k1: float
    k2: float

    def __post_init__(self):
        if self.beta_a <= 0:
            raise ParameterError(f"beta_a must be positive, got {self.beta_a!r}")
        if self.k1 <= 0 or self.k2 <= 0:
            raise ParameterError(f"k1 and k2 must be positive, got {self.k1!r}, {self.k2!r}")

    def betas(self) -> tuple[float, float, float]:
        return self.beta_a, self.k1 * self.beta_a, self.k2 * self.beta_a


def preservation_time_zero_t(x: float, eta: float, omega_sq: float, omega_c: float) -> float:
    """Closed-form vanishing time of the zero-temperature GHZ-Werner GMC.

    (1/w_c) sqrt((4x / 3(1-x))^(1 / (2 eta Omega^2)) - 1); returns 0 for
    x <= 3/7 and +inf for x = 1.
    """
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"mixing parameter must lie in [0, 1], got {x!r}")
    if eta <= 0 or omega_sq <= 0 or omega_c <= 0:
        raise ParameterError("eta, omega_sq and omega_c must be positive")
    if x == 1.0:
        return math.inf
    ratio = 4.0 * x / (3.0 * (1.0 - x))
    if ratio <= 1.0:  # x <= 3/7
        return 0.0
    return math.sqrt(ratio ** (1.0 / (2.0 * eta * omega_sq)) - 1.0) / omega_c


def preservation_time_numeric(
    measure_curve: Callable[[float], float],
    t_max: float,
    threshold: float = DEAD_THRESHOLD,
    rel_tol: float = ROOT_REL_TOL,
) -> float:
    """Last time the (nonincreasing) curve stays above `threshold`.

    Bracket-doubling from a tiny seed followed by bisection to relative
    tolerance `rel_tol`; returns +inf when the curve is still alive at
    t_max.
    """
    if t_max <= 0:
        raise ParameterError(f"t_max must be positive, got {t_max!r}")
    v0 = measure_curve(0.0)
    if v0 <= 0.0:
        raise NoCorrelationError(f"measure starts at {v0!r}; no preservation time exists")
    if v0 <= threshold:
        return 0.0
    if measure_curve(t_max) > threshold:
        return math.inf

    lo = 0.0
    hi = t_max * 2.0**-48
    while measure_curve(hi) > threshold:
        lo = hi
        hi *= 2.0
        if hi >= t_max:
            hi = t_max
            break
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if measure_curve(mid) > threshold:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class CharacteristicTime(NamedTuple):
    time: float
    reached: bool


def characteristic_time(
    measure_curve: Callable[[float], float],
    t_max: float,
    epsilon: float = DEFAULT_EPSILON,
) -> CharacteristicTime:
    """Smallest time where the curve falls below (1 - epsilon) of its start.

    Returns (t_max, reached=False) when the curve never crosses.
    """
    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if t_max <= 0:
        raise ParameterError(f"t_max must be positive, got {t_max!r}")
    v0 = measure_curve(0.0)
    if v0 <= 0.0:
        raise NoCorrelationError(f"measure starts at {v0!r}; no characteristic time exists")
    target = (1.0 - epsilon) * v0
    if measure_curve(t_max) >= target:
        return CharacteristicTime(t_max, False)

    lo = 0.0
    hi = t_max * 2.0**-48
    while measure_curve(hi) >= target:
        lo = hi
        hi *= 2.0
        if hi >= t_max:
            hi = t_max
            break
    while hi - lo > ROOT_REL_TOL * hi:
        mid = 0.5 * (lo + hi)
        if measure_curve(mid) >= target:
            lo = mid
        else:
            hi = mid
    return CharacteristicTime(0.5 * (lo + hi), True)


def freezing_intervals(
    ts: Sequence[float],
    values: Sequence[float],
    value_tol: float = 0.01,
    value_floor: float = 0.05,
    min_points: int = 6,
    span_ratio: float = 2.0,
) -> list[tuple[float, float]]:
    """Maximal intervals where the sampled curve holds its value.

    Convention: the grid is split into runs that stay within
    value_tol * values[0] of the run's entry value.  A run counts as frozen
    when it (a) spans at least `min_points` samples, (b) never dips below
    value_floor * values[0] (a near-dead curve cannot freeze), and (c)
    lasts at least `span_ratio` times longer than some neighbouring run
    that still starts above the floor -- a plateau must stand out against
    an adjacent transit, which is what separates a staircase step from
    steady decay.  Adjacent qualifying runs merge into one reported
    interval.  Resolving an early plateau requires a grid that samples it
    (log-spaced times).
    """
    ts = np.asarray(ts, dtype=float)
    vs = np.asarray(values, dtype=float)
    if ts.shape != vs.shape or ts.ndim != 1 or ts.size < 2:
        raise ParameterError("need matching 1-d time and value arrays with >= 2 samples")
    v0 = vs[0]
    if v0 <= 0.0:
        raise NoCorrelationError("freezing detection needs a positive initial value")
    tol = value_tol * v0
    floor = value_floor * v0

    runs: list[tuple[int, int]] = []  # [start, end] inclusive indices
    start = 0
    anchor = vs[0]
    for i in range(1, ts.size):
        if abs(vs[i] - anchor) <= tol:
            continue
        runs.append((start, i - 1))
        start = i
        anchor = vs[i]
    runs.append((start, ts.size - 1))

    def span(run: tuple[int, int]) -> float:
        return float(ts[run[1]] - ts[run[0]])

    def stands_out(pos: int) -> bool:
        neighbours = [
            runs[j]
            for j in (pos - 1, pos + 1)
            if 0 <= j < len(runs) and vs[runs[j][0]] >= floor
        ]
        if not neighbours:
            return True
        return any(span(runs[pos]) >= span_ratio * span(nb) for nb in neighbours)

    qualifying = [
        (a, b)
        for pos, (a, b) in enumerate(runs)
        if b - a + 1 >= min_points
        and vs[a : b + 1].min() >= floor
        and stands_out(pos)
    ]
    merged: list[list[int]] = []
    for a, b in qualifying:
        if merged and a == merged[-1][1] + 1:
            merged[-1][1] = b
        else:
            merged.append([a, b])
    return [(float(ts[a]), float(ts[b])) for a, b in merged]


def gmc_ghz_werner_low_t(
    x: float,
    t: float,
    eta: float,
    omega_sq: float,
    omega_c: float,
    betas: tuple[float, float, float],
) -> float:
    """Aggregate-bracket low-temperature GMC curve for the GHZ-Werner family.

    max{0, x [(1 + (w_c t)^2) (b_A b_B b_C)^2 sinh^2(pi t/b_A)
    sinh^2(pi t/b_B) sinh^2(pi t/b_C) / (pi^2 t^2)]^(-2 eta Omega^2)
    - 3(1-x)/4}, evaluated in log space to avoid sinh overflow.

    The bracket applies the total Omega^2 to every thermal factor, so this
    curve is NOT the per-reservoir pipeline result at finite temperature;
    it is kept because its vanishing time satisfies the implicit relation
    checked by preservation_time_sinh_residual.  Cross-check only.
    """
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"mixing parameter must lie in [0, 1], got {x!r}")
    if t < 0:
        raise ParameterError(f"time must be >= 0, got {t!r}")
    if t == 0.0:
        return math.inf if x > 0 else 0.0
    log_bracket = math.log1p((omega_c * t) ** 2) - math.log(math.pi**2 * t * t)
    for beta in betas:
        z = math.pi * t / beta
        log_bracket += 2.0 * (math.log(beta) + _log_sinh(z))
    exponent = -2.0 * eta * omega_sq * log_bracket
    if exponent > 700.0:  # bracket -> 0 as t -> 0; the curve diverges there
        return math.inf
    return max(0.0, x * math.exp(exponent) - 0.75 * (1.0 - x))


def _log_sinh(z: float) -> float:
    if z <= 0.0:
        raise ParameterError(f"need z > 0, got {z!r}")
    return z + math.log(-math.expm1(-2.0 * z)) - math.log(2.0)


def preservation_time_sinh_residual(
    t_p: float,
    x: float,
    eta: float,
    omega_sq: float,
    omega_c: float,
    betas: tuple[float, float, float],
) -> tuple[float, float]:
    """Both sides of the implicit sinh-product preservation-time relation.

    lhs = (b_A b_B b_C sinh(pi t_p/b_A) sinh(pi t_p/b_B) sinh(pi t_p/b_C))^2
    rhs = pi^2 t_p^2 / (1 + (w_c t_p)^2) * (4x / 3(1-x))^(1 / (2 eta Omega^2))

    The vanishing time of gmc_ghz_werner_low_t solves lhs = rhs exactly.
    """
    if not 0.0 < x < 1.0:
        raise ParameterError(f"mixing parameter must lie in (0, 1), got {x!r}")
    if t_p <= 0:
        raise ParameterError(f"t_p must be positive, got {t_p!r}")
    log_lhs = 0.0
    for beta in betas:
        log_lhs += 2.0 * (math.log(beta) + _log_sinh(math.pi * t_p / beta))
    lhs = math.exp(log_lhs)
    ratio = 4.0 * x / (3.0 * (1.0 - x))
    rhs = (
        math.pi**2
        * t_p**2
        / (1.0 + (omega_c * t_p) ** 2)
        * ratio ** (1.0 / (2.0 * eta * omega_sq))
    )
    return lhs, rhs


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian parameter grid driving batch evaluation.

    Times, inverse temperatures and frequencies share the natural units of
    the reservoir module.  `beta_as` may contain math.inf entries meaning
    zero temperature (only valid with the zero-t or quadrature methods).
    """

    xs: Sequence[float]
    etas: Sequence[float]
    beta_as: Sequence[float]
    k1s: Sequence[float]
    k2s: Sequence[float]
    t_start: float
    t_stop: float
    t_count: int
    measures: Sequence[str] = ("gmc",)
    method: GammaMethod = GammaMethod.ZERO_T_CLOSED_FORM
    state: str = "ghz"
    omega_c: float = 1.0
    include_timescales: bool = False
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        for name, seq in (
            ("xs", self.xs),
            ("etas", self.etas),
            ("beta_as", self.beta_as),
            ("k1s", self.k1s),
            ("k2s", self.k2s),
            ("measures", self.measures),
        ):
            if len(seq) == 0:
                raise ParameterError(f"{name} must be nonempty")
        if self.t_count < 2:
            raise ParameterError(f"t_count must be >= 2, got {self.t_count!r}")
        if not self.t_stop > self.t_start >= 0.0:
            raise ParameterError(
                f"need t_stop > t_start >= 0, got {self.t_start!r}, {self.t_stop!r}"
            )
        if self.omega_c <= 0:
            raise ParameterError(f"omega_c must be positive, got {self.omega_c!r}")
        unknown = set(self.measures) - set(MEASURES)
        if unknown:
            raise ParameterError(f"unknown measures: {sorted(unknown)}")
        if self.state not in STATES:
            raise ParameterError(f"unknown state {self.state!r}; choose from {sorted(STATES)}")

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_stop, self.t_count)


@dataclass(frozen=True)
class MeasureResult:
    name: str
    value: float
    t: float
    parameters: dict
    error: str | None = None


@dataclass(frozen=True)
class TimescaleResult:
    t_p: float
    t_c: float
    t_c_reached: bool
    freezing: list[tuple[float, float]]
    name: str
    parameters: dict
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    measures: list[MeasureResult] = field(default_factory=list)
    timescales: list[TimescaleResult] = field(default_factory=list)


def make_reservoirs(
    eta: float,
    omega_c: float,
    beta_a: float,
    k1: float,
    k2: float,
    omegas: tuple[float, float, float],
) -> tuple[ReservoirSpec, ReservoirSpec, ReservoirSpec]:
    """Three Ohmic reservoirs with beta_B = k1 beta_A, beta_C = k2 beta_A."""
    spectral = OhmicSpectralDensity(eta, omega_c)
    if math.isinf(beta_a):
        betas = (ZERO_TEMPERATURE, ZERO_TEMPERATURE, ZERO_TEMPERATURE)
    else:
        betas = GradientSpec(beta_a, k1, k2).betas()
    return tuple(
        ReservoirSpec(spectral, beta, omega) for beta, omega in zip(betas, omegas)
    )


def run_sweep(grid: SweepGrid, qubits: QubitTriple) -> SweepResult:
    """Evaluate every measure on every grid point, in lexicographic order.

    Individual point failures are recorded on their rows and never abort
    the sweep.
    """
    omegas = (qubits.omega_a, qubits.omega_b, qubits.omega_c)
    times = grid.times()
    psi = STATES[grid.state]()
    result = SweepResult()

    for x, eta, beta_a, k1, k2 in itertools.product(
        grid.xs, grid.etas, grid.beta_as, grid.k1s, grid.k2s
    ):
        params = {
            "state": grid.state,
            "x": x,
            "eta": eta,
            "beta_a": beta_a,
            "k1": k1,
            "k2": k2,
            "omega_sq_a": qubits.omega_a**2,
            "omega_sq_b": qubits.omega_b**2,
            "omega_sq_c": qubits.omega_c**2,
            "omega_c": grid.omega_c,
            "method": grid.method.value,
        }
        try:
            reservoirs = make_reservoirs(eta, grid.omega_c, beta_a, k1, k2, omegas)
            rho0 = werner(psi, x)
        except Exception as exc:  # recorded, not raised
            msg = f"{type(exc).__name__}: {exc}"
            for name in grid.measures:
                for t in times:
                    result.measures.append(MeasureResult(name, math.nan, float(t), params, msg))
                if grid.include_timescales:
                    result.timescales.append(
                        TimescaleResult(math.nan, math.nan, False, [], name, params, msg)
                    )
            continue

        evolved = {}
        curve_error = None
        try:
            for t in times:
                factors = dephasing_factors(qubits, reservoirs, float(t), grid.method)
                evolved[float(t)] = evolve(rho0, factors)
        except Exception as exc:
            curve_error = f"{type(exc).__name__}: {exc}"

        for name in grid.measures:
            fn = MEASURES[name]
            sampled = []
            measure_error = curve_error
            for t in times:
                if curve_error is not None:
                    result.measures.append(
                        MeasureResult(name, math.nan, float(t), params, curve_error)
                    )
                    continue
                try:
                    value = fn(evolved[float(t)])
                except Exception as exc:
                    measure_error = measure_error or f"{type(exc).__name__}: {exc}"
                    result.measures.append(
                        MeasureResult(
                            name, math.nan, float(t), params, f"{type(exc).__name__}: {exc}"
                        )
                    )
                    continue
                sampled.append(value)
                result.measures.append(MeasureResult(name, value, float(t), params))
            if not grid.include_timescales:
                continue
            if measure_error is not None or len(sampled) != len(times):
                result.timescales.append(
                    TimescaleResult(
                        math.nan, math.nan, False, [], name, params,
                        measure_error or "measure failed on this grid point",
                    )
                )
                continue

            def curve(t: float) -> float:
                factors = dephasing_factors(qubits, reservoirs, t, grid.method)
                return fn(evolve(rho0, factors))

            try:
                t_p = preservation_time_numeric(curve, grid.t_stop)
                t_c, reached = characteristic_time(curve, grid.t_stop, grid.epsilon)
                freezing = freezing_intervals(times, np.asarray(sampled))
                result.timescales.append(
                    TimescaleResult(t_p, t_c, reached, freezing, name, params)
                )
            except Exception as exc:
                result.timescales.append(
                    TimescaleResult(
                        math.nan, math.nan, False, [], name, params,
                        f"{type(exc).__name__}: {exc}",
                    )
                )
    return result
