"""Stability certificates for the two equilibria.

Three kinds of evidence are produced, none of them symbolic proofs:

* eigenvalue classification of the 7x7 Jacobian at an equilibrium,
* the quartic factor of the characteristic polynomial at the disease-free
  point, whose constant term changes sign exactly at R_c = 1 and certifies a
  positive real root (hence instability) whenever it is negative,
* a numeric audit of the energy function V that decreases along trajectories
  when R_c < 1, run as simulations from seeded initial conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .model import (
    EquilibriumPoint,
    ModelParameters,
    control_reproduction_number,
    disease_free_equilibrium,
    equilibrium_tolerance,
    jacobian,
    rhs,
    state_array,
)
from .simulate import IntegratorConfig, integrate


@dataclass(frozen=True)
class QuarticCoefficients:
    """Coefficients of the quartic factor lambda^4 + a1 l^3 + a2 l^2 + a3 l + a4.

    The grouped rates are kept alongside: B1 = alpha+mu, B2 = gamma2+phi2+mu,
    B3 = gamma3+mu, C1 = sigma+epsilon+mu, C2 = sigma, C3 = sigma*(1-rho)*alpha,
    C4 = epsilon*omega, D = beta*S0.  The constant term satisfies
    a4 = B1*B2*B3*C1*(1 - R_c), so sign(a4) = sign(1 - R_c).
    """

    a1: float
    a2: float
    a3: float
    a4: float
    B1: float
    B2: float
    B3: float
    C1: float
    C2: float
    C3: float
    C4: float
    D: float


@dataclass(frozen=True)
class PositiveRootCertificate:
    """Bracketed positive real root of the quartic, when one must exist.

    ``exists`` is True iff a4 < 0, in which case G(0) < 0 while G grows to
    +infinity, forcing a sign change on (0, bracket_hi].
    """

    exists: bool
    bracket: Optional[tuple[float, float]] = None
    root: Optional[float] = None


@dataclass(frozen=True)
class LyapunovAudit:
    """Outcome of one decrease-and-converge check along a simulated run."""

    passed: bool
    max_violation: float
    final_distance: float
    horizon: float
    reason: Optional[str] = None


@dataclass(frozen=True)
class StabilityReport:
    r_c: float
    kind: str
    eigenvalues: np.ndarray
    max_real_part: float
    verdict: str
    quartic: QuarticCoefficients
    lyapunov: Optional[LyapunovAudit] = None


def quartic_coefficients(params: ModelParameters) -> QuarticCoefficients:
    """Expand the quartic factor of the characteristic polynomial at the DFE.

    Construction is self-checked: the coefficient form is compared against
    the unexpanded product form at ten sample points (1e-9 relative).
    """
    p = params
    B1 = p.alpha + p.mu
    B2 = p.gamma2 + p.phi2 + p.mu
    B3 = p.gamma3 + p.mu
    C1 = p.sigma + p.epsilon + p.mu
    C2 = p.sigma
    C3 = p.sigma * (1.0 - p.rho) * p.alpha
    C4 = p.epsilon * p.omega
    D = p.beta * p.S0
    a1 = B1 + B2 + B3 + C1
    a2 = (B1 * B2 + B1 * B3 + B2 * B3 + B1 * C1 + B2 * C1 + B3 * C1
          - D * C2 - D * C4)
    a3 = (B1 * B2 * B3 + B1 * B2 * C1 + B1 * B3 * C1 + B2 * B3 * C1
          - D * B2 * C2 - D * B3 * C2 - D * C3 - D * B1 * C4 - D * B2 * C4)
    a4 = B1 * B2 * B3 * C1 - D * B2 * B3 * C2 - D * B1 * B2 * C4 - D * B3 * C3
    coeffs = QuarticCoefficients(a1, a2, a3, a4, B1, B2, B3, C1, C2, C3, C4, D)

    scale = max(B1, B2, B3, C1, 1.0)
    rng = np.random.default_rng(1830938462)
    for lam in rng.uniform(0.0, 4.0 * scale, size=10):
        expanded = quartic_value(coeffs, lam)
        product = ((lam + B1) * (lam + B2) * (lam + B3) * (lam + C1)
                   - D * (C2 * (lam + B2) * (lam + B3)
                          + C3 * (lam + B3)
                          + C4 * (lam + B1) * (lam + B2)))
        magnitude = (lam ** 4 + abs(a1) * lam ** 3 + abs(a2) * lam ** 2
                     + abs(a3) * lam + abs(a4))
        if abs(expanded - product) > 1e-9 * magnitude:
            raise ArithmeticError(
                "quartic expansion disagrees with its product form; "
                "parameters are numerically degenerate")
    return coeffs


def quartic_value(coeffs: QuarticCoefficients, lam: float) -> float:
    """Evaluate the quartic in coefficient form (Horner)."""
    c = coeffs
    return float((((lam + c.a1) * lam + c.a2) * lam + c.a3) * lam + c.a4)


def positive_root_certificate(coeffs: QuarticCoefficients) -> PositiveRootCertificate:
    """Certify a positive real root of the quartic when a4 < 0.

    The upper bracket end is found by doubling until the quartic turns
    positive; the root inside is then refined by a standard bracketing
    root finder.
    """
    if not coeffs.a4 < 0.0:
        return PositiveRootCertificate(exists=False)
    hi = max(1.0, coeffs.B1 + coeffs.B2 + coeffs.B3 + coeffs.C1)
    while quartic_value(coeffs, hi) <= 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise ArithmeticError("failed to bracket the positive root")
    root = float(brentq(lambda lam: quartic_value(coeffs, lam), 0.0, hi,
                        xtol=1e-12, rtol=1e-14))
    return PositiveRootCertificate(exists=True, bracket=(0.0, hi), root=root)


def entropy_h(x: float) -> float:
    """h(x) = x - 1 - ln x for x > 0; nonnegative, zero only at x = 1."""
    if not x > 0:
        raise ValueError(f"entropy_h requires x > 0, got {x!r}")
    return x - 1.0 - math.log(x)


def lyapunov_value(state, params: ModelParameters) -> float:
    """Energy function V of the global-stability argument at ``state``.

    V = S0*h(S/S0) + R_c*E1 + beta*S0/(alpha+mu)*E2
        + omega*beta*S0/(gamma3+mu)*A
        + beta*S0/(gamma2+phi2+mu)*((1-rho)*E2 + I2)
        - beta*S0*(1-rho)*mu/((alpha+mu)*(gamma2+phi2+mu))*E2

    The three E2 terms combine to a strictly positive net coefficient, so V
    vanishes only at the disease-free point.
    """
    y = state_array(state)
    S, E1, E2, _, I2, A, _ = y
    if not S > 0:
        raise ValueError(f"lyapunov_value requires S > 0, got {S!r}")
    p = params
    S0 = p.S0
    bS0 = p.beta * S0
    rc = control_reproduction_number(p)
    return float(
        S0 * entropy_h(S / S0)
        + rc * E1
        + bS0 / (p.alpha + p.mu) * E2
        + p.omega * bS0 / (p.gamma3 + p.mu) * A
        + bS0 / (p.gamma2 + p.phi2 + p.mu) * ((1.0 - p.rho) * E2 + I2)
        - bS0 * (1.0 - p.rho) * p.mu
        / ((p.alpha + p.mu) * (p.gamma2 + p.phi2 + p.mu)) * E2
    )


def lyapunov_derivative(state, params: ModelParameters) -> float:
    """Closed-form dV/dt along the flow:

    -(mu/S)*(S - S0)^2 + (R_c - 1)*beta*S*(E2 + I2 + omega*A)

    Nonpositive everywhere when R_c < 1.
    """
    y = state_array(state)
    S, _, E2, _, I2, A, _ = y
    if not S > 0:
        raise ValueError(f"lyapunov_derivative requires S > 0, got {S!r}")
    p = params
    rc = control_reproduction_number(p)
    return float(-(p.mu / S) * (S - p.S0) ** 2
                 + (rc - 1.0) * p.beta * S * (E2 + I2 + p.omega * A))


#: V is allowed to increase between samples by this fraction of its scale
AUDIT_WIGGLE = 1e-9

#: convergence threshold on ||state - P0||_inf / N(0)
AUDIT_DISTANCE = 1e-4


def lyapunov_audit(params: ModelParameters, initial, horizon: float,
                   config: IntegratorConfig | None = None) -> LyapunovAudit:
    """Simulate from ``initial`` and check V decreases and the state reaches P0.

    Refuses (raises ValueError) when R_c >= 1, where no decrease is claimed.
    """
    rc = control_reproduction_number(params)
    if rc >= 1.0:
        raise ValueError(
            f"lyapunov audit requires R_c < 1 (got R_c = {rc:.6g}); "
            "the decrease property does not hold otherwise")
    if config is None:
        config = IntegratorConfig(t0=0.0, t_end=horizon, rtol=1e-10,
                                  sample_per_day=1)
    traj = integrate(params, initial, config)
    v = np.array([lyapunov_value(s, params) for s in traj.states])
    vref = max(float(np.max(np.abs(v))), 1.0)
    increases = np.diff(v)
    max_violation = float(np.max(increases, initial=0.0)) / vref
    p0 = disease_free_equilibrium(params).state.as_array()
    n0 = max(float(state_array(initial).sum()), 1.0)
    final_distance = float(np.max(np.abs(traj.states[-1] - p0))) / n0
    monotone_ok = max_violation <= AUDIT_WIGGLE
    converged = final_distance < AUDIT_DISTANCE
    reason = None
    if not monotone_ok:
        reason = f"V increased by {max_violation:.3e} (relative) between samples"
    elif not converged:
        reason = (f"state ended {final_distance:.3e} * N(0) away from the "
                  "disease-free point; horizon may be too short")
    return LyapunovAudit(passed=monotone_ok and converged,
                         max_violation=max_violation,
                         final_distance=final_distance,
                         horizon=horizon, reason=reason)


def global_stability_certificate(params: ModelParameters, n_seeds: int = 20,
                                 horizon: float = 2000.0, seed: int = 0,
                                 seed_scale: float = 2e-6) -> list[LyapunovAudit]:
    """Run the audit from ``n_seeds`` random infection seedings.

    Each seeding starts at the disease-free susceptible level with the five
    infected compartments drawn uniformly from [0, seed_scale * N(0)];
    seedings are kept small enough that the slow (rate mu) demographic
    relaxation of S and R back to the disease-free point fits the horizon.
    """
    rng = np.random.default_rng(seed)
    s0 = params.S0
    audits = []
    for _ in range(n_seeds):
        infected = rng.uniform(0.0, seed_scale * s0, size=5)
        initial = np.array([s0, *infected, 0.0])
        audits.append(lyapunov_audit(params, initial, horizon))
    return audits


def _rate_scale(params: ModelParameters) -> float:
    p = params
    return max(p.alpha + p.mu, p.gamma2 + p.phi2 + p.mu, p.gamma3 + p.mu,
               p.sigma + p.epsilon + p.mu, p.gamma1 + p.phi1 + p.mu,
               p.mu, p.beta * p.S0)


#: verdict margin as a fraction of the dominant linearized rate
VERDICT_MARGIN = 1e-8


def classify_equilibrium(params: ModelParameters,
                         eq: EquilibriumPoint) -> StabilityReport:
    """Eigenvalue verdict at an equilibrium point.

    ``stable`` / ``unstable`` when the largest real part clears the margin
    band on either side, ``marginal`` inside it (eigenvalue noise near
    R_c = 1 should not force a verdict).
    """
    residual = float(np.max(np.abs(rhs(eq.state, params))))
    tol = equilibrium_tolerance(params)
    if residual > tol:
        raise ValueError(
            f"point is not an equilibrium: ||rhs||_inf = {residual:.3e} "
            f"exceeds {tol:.3e}")
    eigenvalues = np.linalg.eigvals(jacobian(eq.state, params))
    max_real = float(np.max(eigenvalues.real))
    margin = VERDICT_MARGIN * _rate_scale(params)
    if max_real < -margin:
        verdict = "stable"
    elif max_real > margin:
        verdict = "unstable"
    else:
        verdict = "marginal"
    return StabilityReport(
        r_c=control_reproduction_number(params),
        kind=eq.kind,
        eigenvalues=eigenvalues,
        max_real_part=max_real,
        verdict=verdict,
        quartic=quartic_coefficients(params),
    )
