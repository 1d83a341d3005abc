"""Core seven-compartment transmission model.

Compartments (all in persons):

    S   susceptible
    E1  early-stage exposed, not yet infectious
    E2  late-stage exposed, infectious
    I1  detected symptomatic, isolated and no longer transmitting
    I2  undetected symptomatic, transmitting
    A   asymptomatic, transmitting with weight omega
    R   recovered

Dynamics (persons/day):

    dS  = Lambda - beta*S*(E2 + I2 + omega*A) - mu*S
    dE1 = beta*S*(E2 + I2 + omega*A) - (sigma + epsilon + mu)*E1
    dE2 = sigma*E1 - (alpha + mu)*E2
    dI1 = rho*alpha*E2 - (gamma1 + phi1 + mu)*I1
    dI2 = (1 - rho)*alpha*E2 - (gamma2 + phi2 + mu)*I2
    dA  = epsilon*E1 - (gamma3 + mu)*A
    dR  = gamma1*I1 + gamma2*I2 + gamma3*A - mu*R

This module holds the parameter and state containers, the vector field and
its analytic Jacobian, the next-generation matrices with the control
reproduction number R_c, and both equilibria (disease-free and endemic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal, Optional

import numpy as np

COMPARTMENTS = ("S", "E1", "E2", "I1", "I2", "A", "R")

#: infected compartments entering the next-generation matrices, in order
INFECTED_COMPARTMENTS = ("E1", "E2", "I1", "I2", "A")

PARAMETER_NAMES = (
    "Lambda", "mu", "beta", "sigma", "epsilon", "alpha", "omega",
    "rho", "gamma1", "gamma2", "gamma3", "phi1", "phi2",
)


@dataclass(frozen=True)
class ModelParameters:
    """Rates and weights of the transmission model.

    Lambda : daily births (persons/day)
    mu     : natural mortality rate (1/day), must be positive
    beta   : basal transmission rate (1/(person*day))
    sigma  : early-exposed -> late-exposed conversion rate (1/day)
    epsilon: early-exposed -> asymptomatic conversion rate (1/day)
    alpha  : late-exposed -> symptomatic conversion rate (1/day)
    omega  : asymptomatic transmission weight, in [0, 1]
    rho    : detection ratio among symptomatic, in [0, 1]
    gamma1, gamma2, gamma3 : recovery rates of I1, I2, A (1/day)
    phi1, phi2             : disease mortality rates of I1, I2 (1/day)
    """

    Lambda: float
    mu: float
    beta: float
    sigma: float
    epsilon: float
    alpha: float
    omega: float
    rho: float
    gamma1: float
    gamma2: float
    gamma3: float
    phi1: float
    phi2: float

    def __post_init__(self):
        for name in PARAMETER_NAMES:
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"parameter {name} must be finite, got {value!r}")
            if value < 0:
                raise ValueError(f"parameter {name} must be nonnegative, got {value!r}")
        if self.mu <= 0:
            raise ValueError("mu must be positive (S0 = Lambda/mu is undefined otherwise)")
        for name in ("rho", "omega"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")

    @property
    def S0(self) -> float:
        """Disease-free susceptible population Lambda/mu."""
        return self.Lambda / self.mu

    def with_updates(self, **changes) -> "ModelParameters":
        """Copy with the named fields replaced (re-validates)."""
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in PARAMETER_NAMES}


@dataclass(frozen=True)
class StateVector:
    """One point (S, E1, E2, I1, I2, A, R) of the compartment phase space."""

    S: float
    E1: float
    E2: float
    I1: float
    I2: float
    A: float
    R: float

    def as_array(self) -> np.ndarray:
        return np.array([self.S, self.E1, self.E2, self.I1, self.I2, self.A, self.R])

    @classmethod
    def from_array(cls, y) -> "StateVector":
        y = np.asarray(y, dtype=float)
        if y.shape != (7,):
            raise ValueError(f"state must have 7 components, got shape {y.shape}")
        return cls(*(float(v) for v in y))

    @property
    def total(self) -> float:
        """Total population N."""
        return self.S + self.E1 + self.E2 + self.I1 + self.I2 + self.A + self.R


EquilibriumKind = Literal["disease_free", "endemic"]


@dataclass(frozen=True)
class EquilibriumPoint:
    kind: EquilibriumKind
    state: StateVector


def state_array(state) -> np.ndarray:
    """Coerce a StateVector or length-7 array-like to a float array."""
    if isinstance(state, StateVector):
        return state.as_array()
    y = np.asarray(state, dtype=float)
    if y.shape != (7,):
        raise ValueError(f"state must have 7 components, got shape {y.shape}")
    return y


def equilibrium_tolerance(params: ModelParameters) -> float:
    """Residual tolerance ||rhs||_inf for accepting a point as an equilibrium.

    Lambda sets the natural flow scale of the system.
    """
    return 1e-8 * max(params.Lambda, 1.0)


def rhs(state, params: ModelParameters) -> np.ndarray:
    """Time derivative of the seven compartments at ``state``.

    The componentwise sum telescopes to the population balance
    Lambda - mu*N - phi1*I1 - phi2*I2.
    """
    y = state_array(state)
    if not np.all(np.isfinite(y)):
        raise ValueError("state components must be finite")
    S, E1, E2, I1, I2, A, R = y
    p = params
    force = p.beta * S * (E2 + I2 + p.omega * A)
    return np.array([
        p.Lambda - force - p.mu * S,
        force - (p.sigma + p.epsilon + p.mu) * E1,
        p.sigma * E1 - (p.alpha + p.mu) * E2,
        p.rho * p.alpha * E2 - (p.gamma1 + p.phi1 + p.mu) * I1,
        (1.0 - p.rho) * p.alpha * E2 - (p.gamma2 + p.phi2 + p.mu) * I2,
        p.epsilon * E1 - (p.gamma3 + p.mu) * A,
        p.gamma1 * I1 + p.gamma2 * I2 + p.gamma3 * A - p.mu * R,
    ])


def population_balance(state, params: ModelParameters) -> float:
    """Net population flow Lambda - mu*N - phi1*I1 - phi2*I2.

    Equals the componentwise sum of :func:`rhs`.
    """
    y = state_array(state)
    if not np.all(np.isfinite(y)):
        raise ValueError("state components must be finite")
    N = float(y.sum())
    return params.Lambda - params.mu * N - params.phi1 * y[3] - params.phi2 * y[4]


def jacobian(state, params: ModelParameters) -> np.ndarray:
    """Analytic 7x7 Jacobian of :func:`rhs` at ``state``.

    Rows and columns follow :data:`COMPARTMENTS` order.
    """
    y = state_array(state)
    if not np.all(np.isfinite(y)):
        raise ValueError("state components must be finite")
    S, E1, E2, I1, I2, A, R = y
    p = params
    force = p.beta * (E2 + I2 + p.omega * A)  # force of infection per susceptible
    bS = p.beta * S
    J = np.zeros((7, 7))
    J[0, 0] = -force - p.mu
    J[0, 2] = -bS
    J[0, 4] = -bS
    J[0, 5] = -p.omega * bS
    J[1, 0] = force
    J[1, 1] = -(p.sigma + p.epsilon + p.mu)
    J[1, 2] = bS
    J[1, 4] = bS
    J[1, 5] = p.omega * bS
    J[2, 1] = p.sigma
    J[2, 2] = -(p.alpha + p.mu)
    J[3, 2] = p.rho * p.alpha
    J[3, 3] = -(p.gamma1 + p.phi1 + p.mu)
    J[4, 2] = (1.0 - p.rho) * p.alpha
    J[4, 4] = -(p.gamma2 + p.phi2 + p.mu)
    J[5, 1] = p.epsilon
    J[5, 5] = -(p.gamma3 + p.mu)
    J[6, 3] = p.gamma1
    J[6, 4] = p.gamma2
    J[6, 5] = p.gamma3
    J[6, 6] = -p.mu
    return J


def control_reproduction_number(params: ModelParameters) -> float:
    """Closed-form control reproduction number R_c.

    R_c = beta*S0/(sigma+epsilon+mu) * [ sigma/(alpha+mu)
          + sigma*(1-rho)*alpha/((alpha+mu)*(gamma2+phi2+mu))
          + epsilon*omega/(gamma3+mu) ]

    Linear in beta and strictly decreasing in rho (rho enters only through
    the undetected-symptomatic term).
    """
    p = params
    bracket = (
        p.sigma / (p.alpha + p.mu)
        + p.sigma * (1.0 - p.rho) * p.alpha
        / ((p.alpha + p.mu) * (p.gamma2 + p.phi2 + p.mu))
        + p.epsilon * p.omega / (p.gamma3 + p.mu)
    )
    return p.beta * p.S0 / (p.sigma + p.epsilon + p.mu) * bracket


def next_generation_matrices(params: ModelParameters) -> tuple[np.ndarray, np.ndarray]:
    """New-infection matrix F and transition matrix V at the disease-free point.

    Both 5x5 over :data:`INFECTED_COMPARTMENTS`. F has only its first row
    nonzero (all new infections enter E1); V is lower triangular with the
    outflow rates on the diagonal.
    """
    p = params
    bS0 = p.beta * p.S0
    F = np.zeros((5, 5))
    F[0, 1] = bS0
    F[0, 3] = bS0
    F[0, 4] = p.omega * bS0
    V = np.zeros((5, 5))
    V[0, 0] = p.sigma + p.epsilon + p.mu
    V[1, 0] = -p.sigma
    V[1, 1] = p.alpha + p.mu
    V[2, 1] = -p.rho * p.alpha
    V[2, 2] = p.gamma1 + p.phi1 + p.mu
    V[3, 1] = -(1.0 - p.rho) * p.alpha
    V[3, 3] = p.gamma2 + p.phi2 + p.mu
    V[4, 0] = -p.epsilon
    V[4, 4] = p.gamma3 + p.mu
    return F, V


def _solve_lower_triangular(V: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Forward substitution for V X = B with V lower triangular."""
    B = np.atleast_2d(B.T).T  # promote vectors to single-column matrices
    n = V.shape[0]
    X = np.zeros_like(B, dtype=float)
    for i in range(n):
        if V[i, i] == 0.0:
            raise np.linalg.LinAlgError("transition matrix V is singular")
        X[i] = (B[i] - V[i, :i] @ X[:i]) / V[i, i]
    return X


def ngm_spectral_radius(F: np.ndarray, V: np.ndarray,
                        method: str = "trace") -> float:
    """Spectral radius of the next-generation matrix F V^-1.

    ``method="trace"`` exploits that F is rank one, so the single nonzero
    eigenvalue of F V^-1 equals its trace; V^-1 comes from forward
    substitution. ``method="dense"`` runs a general dense eigenvalue
    computation and is kept as a cross-check.
    """
    F = np.asarray(F, dtype=float)
    V = np.asarray(V, dtype=float)
    if method == "trace":
        Vinv = _solve_lower_triangular(V, np.eye(V.shape[0]))
        return abs(float(np.trace(F @ Vinv)))
    if method == "dense":
        M = F @ np.linalg.inv(V)
        return float(np.max(np.abs(np.linalg.eigvals(M))))
    raise ValueError(f"unknown method {method!r}")


def disease_free_equilibrium(params: ModelParameters) -> EquilibriumPoint:
    """The always-present infection-free steady state (Lambda/mu, 0, ..., 0)."""
    state = StateVector(params.S0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    return EquilibriumPoint("disease_free", state)


def endemic_equilibrium(params: ModelParameters) -> Optional[EquilibriumPoint]:
    """The unique positive steady state, or None when R_c <= 1.

    E1* = Lambda*(R_c - 1)/((sigma+epsilon+mu)*R_c) -- the simplified form of
    the positive root of the equilibrium equation, which avoids the
    cancellation in the raw -(mu*beta*S0 - Lambda*beta*R_c) numerator.  The
    remaining components follow by the fixed outflow ratios, and the result
    satisfies R_c = S0/S*.
    """
    p = params
    rc = control_reproduction_number(p)
    if rc <= 1.0:
        return None
    conv = p.sigma + p.epsilon + p.mu
    e1 = p.Lambda * (rc - 1.0) / (conv * rc)
    e2 = p.sigma / (p.alpha + p.mu) * e1
    i1 = p.sigma * p.rho * p.alpha / ((p.alpha + p.mu) * (p.gamma1 + p.phi1 + p.mu)) * e1
    i2 = (p.sigma * (1.0 - p.rho) * p.alpha
          / ((p.alpha + p.mu) * (p.gamma2 + p.phi2 + p.mu)) * e1)
    a = p.epsilon / (p.gamma3 + p.mu) * e1
    r = e1 / p.mu * (
        p.sigma * p.rho * p.alpha * p.gamma1
        / ((p.alpha + p.mu) * (p.gamma1 + p.phi1 + p.mu))
        + p.sigma * (1.0 - p.rho) * p.alpha * p.gamma2
        / ((p.alpha + p.mu) * (p.gamma2 + p.phi2 + p.mu))
        + p.epsilon * p.gamma3 / (p.gamma3 + p.mu)
    )
    s = p.Lambda / (p.beta * e1 * (
        p.sigma / (p.alpha + p.mu)
        + p.sigma * (1.0 - p.rho) * p.alpha
        / ((p.alpha + p.mu) * (p.gamma2 + p.phi2 + p.mu))
        + p.epsilon * p.omega / (p.gamma3 + p.mu)
    ) + p.mu)
    point = EquilibriumPoint("endemic", StateVector(s, e1, e2, i1, i2, a, r))
    residual = float(np.max(np.abs(rhs(point.state, p))))
    if residual > equilibrium_tolerance(p):
        raise ArithmeticError(
            f"endemic equilibrium residual {residual:.3e} exceeds tolerance; "
            "parameters are numerically degenerate")
    return point
