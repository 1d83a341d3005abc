"""Detection-ratio sweeps and forward prediction from a calibrated baseline.

A sweep re-runs the model over a fixed horizon for several values of the
detection ratio rho, everything else held at the baseline. "Total
infections" is the cumulative inflow into I1+I2+A over the horizon and
"asymptomatic infections" the cumulative inflow into A; both are horizon
stable, unlike point prevalences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .calibrate import FitResult
from .errors import IntegrationError
from .model import ModelParameters, control_reproduction_number, state_array
from .simulate import (
    IncidenceSeries,
    IntegratorConfig,
    cumulative_by_class,
    daily_incidence,
    integrate,
    peak,
)

Baseline = Union[FitResult, tuple]


@dataclass(frozen=True)
class RhoScenario:
    """Outcome of one sweep member."""

    rho: float
    r_c: float
    cum_total: float
    cum_I1: float
    cum_I2: float
    cum_A: float
    cum_proportions: np.ndarray
    prevalence_proportions: np.ndarray
    final_day_incidence: float


@dataclass(frozen=True)
class SweepResult:
    scenarios: tuple[RhoScenario, ...]
    horizon: float

    @property
    def rhos(self) -> np.ndarray:
        return np.array([s.rho for s in self.scenarios])


@dataclass(frozen=True)
class DeclinePercentages:
    """Relative drops from the lowest to the highest swept rho, in percent.

    NaN marks an undefined ratio (zero metric at the lowest rho).
    """

    total_pct: float
    asymptomatic_pct: float


@dataclass(frozen=True)
class Forecast:
    """Point prediction past a fitted window; days keep the window's indexing."""

    fit: FitResult
    horizon: int
    incidence: IncidenceSeries
    peak_day: int
    peak_value: float


def _baseline(base: Baseline) -> tuple[ModelParameters, np.ndarray]:
    if isinstance(base, FitResult):
        return base.params, base.initial.as_array()
    params, initial = base
    return params, state_array(initial)


def rho_sweep(base: Baseline, rho_values: Sequence[float] = (0.2, 0.4, 0.6, 0.8),
              horizon: float = 365.0,
              integrator: IntegratorConfig | None = None) -> SweepResult:
    """One simulation per rho over ``horizon`` days, metrics per scenario.

    Results follow the input order of ``rho_values``.
    """
    rho_values = list(rho_values)
    if not rho_values:
        raise ValueError("rho_values must be nonempty")
    if any(not 0.0 <= r <= 1.0 for r in rho_values):
        raise ValueError("every rho must lie in [0, 1]")
    params, initial = _baseline(base)
    config = integrator or IntegratorConfig(t0=0.0, t_end=float(horizon),
                                            sample_per_day=1)
    scenarios = []
    for rho in rho_values:
        scenario_params = params.with_updates(rho=float(rho))
        try:
            traj = integrate(scenario_params, initial, config)
        except IntegrationError as exc:
            raise IntegrationError(f"scenario rho={rho:g} failed: {exc}",
                                   exc.t) from exc
        breakdown = cumulative_by_class(traj)
        incidence = daily_incidence(traj)
        scenarios.append(RhoScenario(
            rho=float(rho),
            r_c=control_reproduction_number(scenario_params),
            cum_total=breakdown.cum_total,
            cum_I1=breakdown.cum_I1,
            cum_I2=breakdown.cum_I2,
            cum_A=breakdown.cum_A,
            cum_proportions=breakdown.cum_proportions,
            prevalence_proportions=breakdown.prevalence_proportions,
            final_day_incidence=float(incidence.values[-1]),
        ))
    return SweepResult(scenarios=tuple(scenarios), horizon=float(horizon))


def decline_percentages(sweep: SweepResult) -> DeclinePercentages:
    """100 * (metric(rho_min) - metric(rho_max)) / metric(rho_min).

    Computed for the cumulative total and the cumulative asymptomatic count.
    """
    if len(sweep.scenarios) < 2:
        raise ValueError("decline percentages need at least two rho values")
    low = min(sweep.scenarios, key=lambda s: s.rho)
    high = max(sweep.scenarios, key=lambda s: s.rho)

    def pct(a: float, b: float) -> float:
        if a == 0.0:
            return float("nan")
        return 100.0 * (a - b) / a

    return DeclinePercentages(total_pct=pct(low.cum_total, high.cum_total),
                              asymptomatic_pct=pct(low.cum_A, high.cum_A))


def forecast(fit: FitResult, horizon: int) -> Forecast:
    """Extend the fitted run ``horizon`` days past its data window.

    The returned incidence series covers only the extension; day indices
    continue the fitted window's day numbering, so the reported peak is
    directly comparable with the observed series.
    """
    horizon = int(horizon)
    if horizon < 1:
        raise ValueError("horizon must be at least 1 day")
    window = fit.integrator
    config = IntegratorConfig(
        t0=window.t0, t_end=window.t0 + fit.n_days + horizon,
        method=window.method, step=window.step, rtol=window.rtol,
        atol=window.atol, sample_per_day=window.sample_per_day,
        max_steps=window.max_steps)
    traj = integrate(fit.params, fit.initial, config)
    full = daily_incidence(traj)
    extension = IncidenceSeries(days=full.days[fit.n_days:fit.n_days + horizon].copy(),
                                values=full.values[fit.n_days:fit.n_days + horizon].copy())
    day, value = peak(extension)
    return Forecast(fit=fit, horizon=horizon, incidence=extension,
                    peak_day=day, peak_value=value)
