"""Time integration of the compartment model and derived observables.

Simulations carry three auxiliary quadrature states alongside the seven
compartments: the cumulative inflows into I1 (integral of rho*alpha*E2),
I2 (integral of (1-rho)*alpha*E2) and A (integral of epsilon*E1).  Daily new
detected cases are differences of the first counter at day boundaries, which
stays exact under adaptive stepping (no sampling of the integrand at day
edges is involved).

Two steppers are provided: an embedded Fehlberg 4(5) pair with proportional
step control (default) and a fixed-step classical 4th-order Runge-Kutta kept
for convergence checks.  Both abort, rather than clip, when a compartment
undershoots below -1e-9 * N(0); clipping would silently break the population
balance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import IntegrationError
from .model import ModelParameters, StateVector, state_array

#: undershoot tolerance band, relative to the initial total population
NEGATIVITY_BAND = 1e-9

# Fehlberg 4(5) tableau (stage times omitted: the system is autonomous);
# the 5th-order solution is propagated and the difference to the 4th-order
# one drives the step controller.
_FEHLBERG_A = (
    (),
    (1 / 4,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8.0, 3680 / 513, -845 / 4104),
    (-8 / 27, 2.0, -3554 / 2565, 1859 / 4104, -11 / 40),
)
_FEHLBERG_A_ROWS = tuple(np.array(row) for row in _FEHLBERG_A)
_FEHLBERG_B5 = np.array([16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55])
_FEHLBERG_B4 = np.array([25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0])
_FEHLBERG_E = _FEHLBERG_B5 - _FEHLBERG_B4


@dataclass(frozen=True)
class IntegratorConfig:
    """How to integrate: window, method, accuracy and output density.

    ``method`` is "adaptive" (embedded 4(5)) or "rk4" (fixed step ``step``).
    ``atol=None`` resolves to 1e-10 * N(0) at integration time.  States are
    recorded on a uniform grid of ``sample_per_day`` points per day, so day
    boundaries always land on stored samples.
    """

    t0: float = 0.0
    t_end: float = 100.0
    method: str = "adaptive"
    step: float = 0.01
    rtol: float = 1e-8
    atol: float | None = None
    sample_per_day: int = 10
    max_steps: int = 2_000_000

    def __post_init__(self):
        if self.method not in ("adaptive", "rk4"):
            raise ValueError(f"unknown integration method {self.method!r}")
        if not self.t_end > self.t0:
            raise ValueError("t_end must exceed t0")
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.rtol <= 0 or (self.atol is not None and self.atol <= 0):
            raise ValueError("tolerances must be positive")
        if self.sample_per_day < 1:
            raise ValueError("sample_per_day must be at least 1")


@dataclass(frozen=True)
class Trajectory:
    """Stored solution: times (days), states (n,7) and cumulative inflows (n,3).

    The inflow columns are the running integrals of rho*alpha*E2 (into I1),
    (1-rho)*alpha*E2 (into I2) and epsilon*E1 (into A), all starting at zero.
    """

    times: np.ndarray
    states: np.ndarray
    cumulative_inflows: np.ndarray

    def __post_init__(self):
        for arr in (self.times, self.states, self.cumulative_inflows):
            arr.flags.writeable = False

    @property
    def cum_I1(self) -> np.ndarray:
        return self.cumulative_inflows[:, 0]

    @property
    def cum_I2(self) -> np.ndarray:
        return self.cumulative_inflows[:, 1]

    @property
    def cum_A(self) -> np.ndarray:
        return self.cumulative_inflows[:, 2]

    @property
    def totals(self) -> np.ndarray:
        """Total population N(t) at each stored time."""
        return self.states.sum(axis=1)

    def final_state(self) -> StateVector:
        return StateVector.from_array(self.states[-1])

    def day_boundary_indices(self) -> np.ndarray:
        """Indices of stored samples sitting on whole days since t0.

        Raises if any whole day inside the span is missing from the grid.
        """
        offsets = self.times - self.times[0]
        nearest = np.rint(offsets)
        on_day = np.abs(offsets - nearest) <= 1e-9
        days = nearest[on_day].astype(int)
        idx = np.nonzero(on_day)[0]
        # keep the first sample for each day
        _, first = np.unique(days, return_index=True)
        idx, days = idx[first], days[first]
        expected = int(math.floor(offsets[-1] + 1e-9))
        if len(days) < expected + 1 or np.any(days[:expected + 1] != np.arange(expected + 1)):
            raise ValueError("stored grid does not cover every whole day of the span")
        return idx[:expected + 1]


@dataclass(frozen=True)
class IncidenceSeries:
    """New detected cases per day; day d covers [d, d+1) after window start."""

    days: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        for arr in (self.days, self.values):
            arr.flags.writeable = False
        if len(self.days) != len(self.values):
            raise ValueError("days and values must align")


@dataclass(frozen=True)
class ClassBreakdown:
    """Cumulative inflows by infected class and their shares at the endpoint.

    Proportions are NaN when the corresponding total is zero (an undefined
    marker, never a division by zero). Both the cumulative-inflow shares and
    the point-prevalence shares at t_end are reported; which one a given
    summary statistic refers to is for the caller to decide.
    """

    cum_I1: float
    cum_I2: float
    cum_A: float
    cum_proportions: np.ndarray
    prevalence_proportions: np.ndarray

    @property
    def cum_total(self) -> float:
        return self.cum_I1 + self.cum_I2 + self.cum_A


def _extended_rhs(params: ModelParameters) -> Callable[[np.ndarray], np.ndarray]:
    """Derivative of the 10-component state (7 compartments + 3 counters)."""
    L = params.Lambda
    mu = params.mu
    beta = params.beta
    omega = params.omega
    k_e1 = params.sigma + params.epsilon + params.mu
    k_e2 = params.alpha + params.mu
    k_i1 = params.gamma1 + params.phi1 + params.mu
    k_i2 = params.gamma2 + params.phi2 + params.mu
    k_a = params.gamma3 + params.mu
    sigma = params.sigma
    eps = params.epsilon
    in_i1 = params.rho * params.alpha
    in_i2 = (1.0 - params.rho) * params.alpha
    g1, g2, g3 = params.gamma1, params.gamma2, params.gamma3

    def f(y: np.ndarray) -> np.ndarray:
        S, E1, E2, I1, I2, A, R = y[0], y[1], y[2], y[3], y[4], y[5], y[6]
        force = beta * S * (E2 + I2 + omega * A)
        return np.array([
            L - force - mu * S,
            force - k_e1 * E1,
            sigma * E1 - k_e2 * E2,
            in_i1 * E2 - k_i1 * I1,
            in_i2 * E2 - k_i2 * I2,
            eps * E1 - k_a * A,
            g1 * I1 + g2 * I2 + g3 * A - mu * R,
            in_i1 * E2,
            in_i2 * E2,
            eps * E1,
        ])

    return f


def _output_grid(config: IntegratorConfig) -> np.ndarray:
    span = config.t_end - config.t0
    n_full = int(math.floor(span * config.sample_per_day + 1e-9))
    times = config.t0 + np.arange(n_full + 1) / config.sample_per_day
    if times[-1] < config.t_end - 1e-9:
        times = np.append(times, config.t_end)
    return times


def _check_state(y: np.ndarray, t: float, band: float) -> None:
    if not np.all(np.isfinite(y)):
        raise IntegrationError("state became non-finite", t)
    if np.min(y[:7]) < -band:
        raise IntegrationError(
            f"compartment undershot the nonnegativity band by {-np.min(y[:7]):.3e}", t)


def integrate(params: ModelParameters, initial,
              config: IntegratorConfig) -> Trajectory:
    """Solve the model over ``[t0, t_end]`` from ``initial``.

    The three cumulative inflow counters start at zero and are integrated
    alongside the compartments as extra quadrature states.
    """
    y0 = state_array(initial)
    if np.any(y0 < 0):
        raise ValueError("initial state must be nonnegative")
    n0 = float(y0.sum())
    band = NEGATIVITY_BAND * max(n0, 1.0)
    atol = config.atol if config.atol is not None else 1e-10 * max(n0, 1.0)
    f = _extended_rhs(params)
    out_times = _output_grid(config)
    y = np.concatenate([y0, np.zeros(3)])
    out = np.empty((len(out_times), 10))
    out[0] = y

    if config.method == "rk4":
        _run_rk4(f, y, out_times, out, config.step, band, config.max_steps)
    else:
        _run_fehlberg(f, y, out_times, out, config.rtol, atol, band, config.max_steps)

    return Trajectory(times=out_times, states=out[:, :7].copy(),
                      cumulative_inflows=out[:, 7:].copy())


def _rk4_step(f, y, h):
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _run_rk4(f, y, out_times, out, step, band, max_steps):
    # the step is snapped so that a whole number of steps fills each output
    # interval; with the defaults (h = 0.01 d, 10 samples/d) it is unchanged
    taken = 0
    for j in range(len(out_times) - 1):
        t, t_next = out_times[j], out_times[j + 1]
        n_sub = max(1, round((t_next - t) / step))
        h = (t_next - t) / n_sub
        for i in range(n_sub):
            y = _rk4_step(f, y, h)
            taken += 1
            if taken > max_steps:
                raise IntegrationError("step budget exhausted", t + i * h)
            _check_state(y, t + (i + 1) * h, band)
        out[j + 1] = y


def _run_fehlberg(f, y, out_times, out, rtol, atol, band, max_steps):
    t = out_times[0]
    next_out = 1
    h_prop = min(0.25, out_times[-1] - t)
    hmin = 1e-12 * max(1.0, abs(out_times[-1] - out_times[0]))
    k = np.empty((6, y.size))
    taken = 0
    while next_out < len(out_times):
        h = min(h_prop, out_times[next_out] - t)
        clamped = h < h_prop
        k[0] = f(y)
        for s in range(1, 6):
            k[s] = f(y + h * (_FEHLBERG_A_ROWS[s] @ k[:s]))
        y5 = y + h * (_FEHLBERG_B5 @ k)
        err_vec = h * (_FEHLBERG_E @ k)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
        err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
        if not math.isfinite(err):
            raise IntegrationError("error estimate became non-finite", t)
        if err <= 1.0:
            t = t + h
            y = y5
            _check_state(y, t, band)
            if abs(t - out_times[next_out]) <= 1e-12 * max(1.0, abs(t)):
                out[next_out] = y
                t = out_times[next_out]
                next_out += 1
        factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        candidate = h * factor
        # a step shortened only to land on the output grid must not drag the
        # controller's proposal down with it
        if not clamped or candidate < h_prop:
            h_prop = candidate
        if h_prop < hmin:
            raise IntegrationError("step size underflow after repeated rejections", t)
        taken += 1
        if taken > max_steps:
            raise IntegrationError("step budget exhausted", t)


def daily_incidence(traj: Trajectory) -> IncidenceSeries:
    """New detected cases per whole day: differences of the I1-inflow counter.

    Requires the trajectory to span at least one whole day.
    """
    if traj.times[-1] - traj.times[0] < 1.0 - 1e-9:
        raise ValueError("trajectory must span at least one whole day")
    idx = traj.day_boundary_indices()
    values = np.diff(traj.cum_I1[idx])
    return IncidenceSeries(days=np.arange(len(values)), values=values)


def cumulative_by_class(traj: Trajectory) -> ClassBreakdown:
    """Cumulative inflows into I1, I2, A at t_end plus endpoint shares."""
    cum = traj.cumulative_inflows[-1]
    total = float(cum.sum())
    cum_props = cum / total if total > 0 else np.full(3, np.nan)
    prev = traj.states[-1, 3:6]
    prev_total = float(prev.sum())
    prev_props = prev / prev_total if prev_total > 0 else np.full(3, np.nan)
    return ClassBreakdown(
        cum_I1=float(cum[0]), cum_I2=float(cum[1]), cum_A=float(cum[2]),
        cum_proportions=cum_props, prevalence_proportions=prev_props,
    )


def peak(series: IncidenceSeries) -> tuple[int, float]:
    """Earliest day attaining the maximum incidence, with its value."""
    if len(series.values) == 0:
        raise ValueError("incidence series is empty")
    i = int(np.argmax(series.values))
    return int(series.days[i]), float(series.values[i])
