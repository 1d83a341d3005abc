"""Least-squares calibration against daily new-confirmed-case series.

The observable is the model's daily inflow into the detected compartment I1,
compared with observed counts by an unweighted sum of squared residuals.
Search is a bounded derivative-free simplex method: internally unconstrained
coordinates are mapped onto each [lo, hi] box through a smooth sine
bijection, so returned points satisfy their bounds exactly and no gradient
is ever needed.  Multi-start restarts jitter the initial guess; the best
replicate wins, ties resolved toward the earlier replicate so results are
reproducible bit for bit under a fixed seed.
"""

from __future__ import annotations

import datetime
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .errors import FitError, IntegrationError
from .model import (
    COMPARTMENTS,
    PARAMETER_NAMES,
    ModelParameters,
    StateVector,
    control_reproduction_number,
)
from .simulate import IntegratorConfig, daily_incidence, integrate

#: objective value reported when the integrator fails at a trial point;
#: finite so the simplex can retreat from the region
INTEGRATION_FAILURE_PENALTY = 1e30


@dataclass(frozen=True)
class FreeValue:
    """A quantity the fit may move, boxed to [lo, hi] with a start value."""

    lo: float
    hi: float
    guess: float

    def __post_init__(self):
        for name in ("lo", "hi", "guess"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"bounds must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        if not self.lo <= self.guess <= self.hi:
            raise ValueError(f"guess {self.guess} outside [{self.lo}, {self.hi}]")


SpecEntry = Union[float, FreeValue]


@dataclass(frozen=True)
class ParameterSpec:
    """Fixed/free split for the 13 model parameters and the initial state.

    ``params`` must cover every parameter name. ``initial`` may omit
    compartments, which default to zero; an omitted S starts at S0 minus the
    total seeded mass of the other compartments, keeping N(0) = S0.
    """

    params: Mapping[str, SpecEntry]
    initial: Mapping[str, SpecEntry] = field(default_factory=dict)

    def __post_init__(self):
        unknown = set(self.params) - set(PARAMETER_NAMES)
        if unknown:
            raise ValueError(f"unknown parameter names: {sorted(unknown)}")
        missing = set(PARAMETER_NAMES) - set(self.params)
        if missing:
            raise ValueError(f"missing parameter entries: {sorted(missing)}")
        unknown = set(self.initial) - set(COMPARTMENTS)
        if unknown:
            raise ValueError(f"unknown compartment names: {sorted(unknown)}")
        for name, entry in self.initial.items():
            lo = entry.lo if isinstance(entry, FreeValue) else entry
            if lo < 0:
                raise ValueError(f"initial {name} must be nonnegative")
        # fixed values and guesses must already form a valid parameter set
        self.assemble(self.guesses())

    @property
    def free_names(self) -> tuple[str, ...]:
        """Free coordinates in canonical order (parameters, then initials)."""
        names = [n for n in PARAMETER_NAMES if isinstance(self.params[n], FreeValue)]
        names += [f"{c}(0)" for c in COMPARTMENTS
                  if isinstance(self.initial.get(c), FreeValue)]
        return tuple(names)

    def _free_entries(self) -> list[FreeValue]:
        entries = [self.params[n] for n in PARAMETER_NAMES
                   if isinstance(self.params[n], FreeValue)]
        entries += [self.initial[c] for c in COMPARTMENTS
                    if isinstance(self.initial.get(c), FreeValue)]
        return entries

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        entries = self._free_entries()
        return (np.array([e.lo for e in entries]),
                np.array([e.hi for e in entries]))

    def guesses(self) -> np.ndarray:
        return np.array([e.guess for e in self._free_entries()])

    def assemble(self, free_values: Sequence[float]) -> tuple[ModelParameters, np.ndarray]:
        """Merge fixed entries with ``free_values`` into (parameters, y0)."""
        free_values = np.asarray(free_values, dtype=float)
        if free_values.shape != (len(self.free_names),):
            raise ValueError(
                f"expected {len(self.free_names)} free values, got {free_values.shape}")
        cursor = 0
        values = {}
        for name in PARAMETER_NAMES:
            entry = self.params[name]
            if isinstance(entry, FreeValue):
                values[name] = float(free_values[cursor])
                cursor += 1
            else:
                values[name] = float(entry)
        params = ModelParameters(**values)
        y0 = np.zeros(7)
        seeded = 0.0
        for i, comp in enumerate(COMPARTMENTS):
            entry = self.initial.get(comp)
            if entry is None:
                continue
            if isinstance(entry, FreeValue):
                y0[i] = float(free_values[cursor])
                cursor += 1
            else:
                y0[i] = float(entry)
            if comp != "S":
                seeded += y0[i]
        if "S" not in self.initial:
            y0[0] = params.S0 - seeded
            if y0[0] < 0:
                raise ValueError(
                    "seeded compartments exceed the susceptible pool S0")
        return params, y0


@dataclass(frozen=True)
class ObservedSeries:
    """Daily new confirmed cases, one value per day with no gaps."""

    counts: np.ndarray
    start_date: Optional[datetime.date] = None

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=float)
        if counts.ndim != 1 or len(counts) == 0:
            raise ValueError("counts must be a nonempty 1-D series")
        if not np.all(np.isfinite(counts)) or np.any(counts < 0):
            raise ValueError("counts must be finite and nonnegative")
        object.__setattr__(self, "counts", counts)
        counts.flags.writeable = False

    def __len__(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class FitConfig:
    restarts: int = 5
    max_evals: int = 2000
    diameter_tol: float = 1e-8
    jitter: float = 0.1
    seed: int = 0
    integrator: Optional[IntegratorConfig] = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("at least one restart is required")
        if self.max_evals < 1:
            raise ValueError("max_evals must be positive")


@dataclass(frozen=True)
class FitResult:
    """Calibrated parameters with diagnostics of the search."""

    params: ModelParameters
    initial: StateVector
    objective: float
    residuals: np.ndarray
    modeled: np.ndarray
    r_c: float
    iterations: int
    n_evals: int
    converged: bool
    history: np.ndarray
    free_names: tuple[str, ...]
    free_values: np.ndarray
    n_days: int
    integrator: IntegratorConfig


def _default_integrator(n_days: int) -> IntegratorConfig:
    return IntegratorConfig(t0=0.0, t_end=float(n_days), sample_per_day=1)


def _model_series(free_values, spec: ParameterSpec, n_days: int,
                  integrator: IntegratorConfig) -> tuple[ModelParameters, np.ndarray, np.ndarray]:
    params, y0 = spec.assemble(free_values)
    if np.any(y0 < 0):
        raise IntegrationError("initial state has a negative component", integrator.t0)
    traj = integrate(params, y0, integrator)
    series = daily_incidence(traj)
    if len(series.values) < n_days:
        raise ValueError(
            f"integration window covers {len(series.values)} days, "
            f"need {n_days}")
    return params, y0, series.values[:n_days]


def sse_objective(free_values, spec: ParameterSpec, data: ObservedSeries,
                  integrator: IntegratorConfig | None = None) -> float:
    """Sum of squared daily residuals; failure maps to a finite penalty."""
    integrator = integrator or _default_integrator(len(data))
    try:
        _, _, model = _model_series(free_values, spec, len(data), integrator)
    except IntegrationError:
        return INTEGRATION_FAILURE_PENALTY
    return float(np.sum((model - data.counts) ** 2))


def _to_box(z: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    return np.clip(lo + (hi - lo) * 0.5 * (np.sin(z) + 1.0), lo, hi)


def _from_box(x: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    u = np.clip(2.0 * (x - lo) / (hi - lo) - 1.0, -1.0, 1.0)
    return np.arcsin(u)


def _nelder_mead(fun, z0: np.ndarray, max_evals: int, diameter_tol: float):
    """Standard reflect/expand/contract/shrink simplex with elitist ordering.

    Returns (z_best, f_best, history, n_evals, iterations, converged) where
    ``history`` holds the best objective after each iteration and is
    nonincreasing by construction.
    """
    n = len(z0)
    simplex = [z0.copy()]
    for i in range(n):
        vertex = z0.copy()
        vertex[i] += 0.5
        simplex.append(vertex)
    values = [fun(z) for z in simplex]
    n_evals = n + 1
    history = []
    iterations = 0
    converged = False

    def order():
        idx = sorted(range(len(values)), key=lambda i: (values[i], i))
        return [simplex[i] for i in idx], [values[i] for i in idx]

    while n_evals < max_evals:
        simplex, values = order()
        iterations += 1
        history.append(values[0])
        diameter = max(float(np.max(np.abs(v - simplex[0]))) for v in simplex[1:])
        if diameter <= diameter_tol * (1.0 + float(np.max(np.abs(simplex[0])))):
            converged = True
            break
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        reflected = centroid + (centroid - worst)
        f_reflected = fun(reflected)
        n_evals += 1
        if f_reflected < values[0]:
            expanded = centroid + 2.0 * (centroid - worst)
            f_expanded = fun(expanded)
            n_evals += 1
            if f_expanded < f_reflected:
                simplex[-1], values[-1] = expanded, f_expanded
            else:
                simplex[-1], values[-1] = reflected, f_reflected
        elif f_reflected < values[-2]:
            simplex[-1], values[-1] = reflected, f_reflected
        else:
            if f_reflected < values[-1]:
                contracted = centroid + 0.5 * (reflected - centroid)
            else:
                contracted = centroid + 0.5 * (worst - centroid)
            f_contracted = fun(contracted)
            n_evals += 1
            if f_contracted < min(f_reflected, values[-1]):
                simplex[-1], values[-1] = contracted, f_contracted
            else:
                best = simplex[0]
                for i in range(1, len(simplex)):
                    simplex[i] = best + 0.5 * (simplex[i] - best)
                    values[i] = fun(simplex[i])
                    n_evals += 1
                    if n_evals >= max_evals:
                        break
    simplex, values = order()
    history.append(values[0])
    return simplex[0], values[0], history, n_evals, iterations, converged


def fit(spec: ParameterSpec, data: ObservedSeries,
        fit_config: FitConfig | None = None) -> FitResult:
    """Minimize the SSE objective over the spec's free coordinates.

    With no free coordinates this degenerates to a single evaluation of the
    fixed configuration.
    """
    cfg = fit_config or FitConfig()
    integrator = cfg.integrator or _default_integrator(len(data))
    names = spec.free_names

    def package(free_values, objective, iterations, n_evals, converged, history):
        try:
            params, y0, model = _model_series(free_values, spec, len(data), integrator)
        except IntegrationError as exc:
            raise FitError(f"best candidate does not integrate: {exc}") from exc
        return FitResult(
            params=params,
            initial=StateVector.from_array(y0),
            objective=float(objective),
            residuals=model - data.counts,
            modeled=model,
            r_c=control_reproduction_number(params),
            iterations=iterations,
            n_evals=n_evals,
            converged=converged,
            history=np.asarray(history, dtype=float),
            free_names=names,
            free_values=np.asarray(free_values, dtype=float),
            n_days=len(data),
            integrator=integrator,
        )

    if not names:
        objective = sse_objective([], spec, data, integrator)
        if objective >= INTEGRATION_FAILURE_PENALTY:
            raise FitError("fixed configuration does not integrate")
        return package(np.array([]), objective, 0, 1, True, [objective])

    lo, hi = spec.bounds()
    guess = spec.guesses()
    rng = np.random.default_rng(cfg.seed)
    best = None
    for replicate in range(cfg.restarts):
        if replicate == 0:
            x_start = guess
        else:
            offset = cfg.jitter * (hi - lo) * rng.uniform(-1.0, 1.0, size=len(names))
            x_start = np.clip(guess + offset, lo, hi)
        z0 = _from_box(x_start, lo, hi)
        result = _nelder_mead(
            lambda z: sse_objective(_to_box(z, lo, hi), spec, data, integrator),
            z0, cfg.max_evals, cfg.diameter_tol)
        if best is None or result[1] < best[1]:
            best = result
    z_best, f_best, history, n_evals, iterations, converged = best
    if f_best >= INTEGRATION_FAILURE_PENALTY:
        raise FitError("every restart failed to integrate; check bounds and data")
    x_best = _to_box(z_best, lo, hi)
    return package(x_best, f_best, iterations, n_evals, converged, history)


def synthesize_data(params: ModelParameters, initial, days: int,
                    noise: str = "none", sigma: float = 0.05, seed: int = 0,
                    start_date: Optional[datetime.date] = None,
                    integrator: IntegratorConfig | None = None) -> ObservedSeries:
    """Simulate ``days`` of daily incidence and apply a noise model.

    ``noise`` is "none", "lognormal" (multiplicative exp(sigma*Z)) or
    "round" (nearest integer). Deterministic for a fixed seed.
    """
    if days < 1:
        raise ValueError("days must be at least 1")
    integrator = integrator or _default_integrator(days)
    traj = integrate(params, initial, integrator)
    values = daily_incidence(traj).values[:days].copy()
    if noise == "none":
        pass
    elif noise == "lognormal":
        rng = np.random.default_rng(seed)
        values = values * np.exp(sigma * rng.standard_normal(len(values)))
    elif noise == "round":
        values = np.rint(values)
    else:
        raise ValueError(f"unknown noise model {noise!r}")
    return ObservedSeries(counts=values, start_date=start_date)
