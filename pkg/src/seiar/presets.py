"""Bundled parameter sets for four SARS-CoV-2 variant waves.

Calibrated against early-outbreak daily-confirmed-case windows: 614G
(England, June-July 2020), Alpha (England, December 2020), Delta (England,
June 2021) and Omicron (Shanghai, March-April 2022). Demographic rates come
from national statistics; beta, epsilon, rho, gamma2 and phi2 were fitted,
the remaining rates are literature values.
"""

from __future__ import annotations

from .model import ModelParameters

VARIANT_614G = ModelParameters(
    Lambda=1740.0, mu=2.5753e-5, beta=5.3720e-9, sigma=0.1975,
    epsilon=0.3415, alpha=0.5, omega=0.6524, rho=0.4689,
    gamma1=0.0588, gamma2=0.0769, gamma3=0.2770,
    phi1=1.7826e-5, phi2=5.5963e-3,
)

VARIANT_ALPHA = ModelParameters(
    Lambda=1740.0, mu=2.5753e-5, beta=7.2151e-9, sigma=0.1975,
    epsilon=0.5748, alpha=0.5, omega=0.6524, rho=0.1103,
    gamma1=0.0588, gamma2=0.0811, gamma3=0.3746,
    phi1=1.7826e-5, phi2=4.4054e-3,
)

VARIANT_DELTA = ModelParameters(
    Lambda=1740.0, mu=2.5753e-5, beta=9.0205e-9, sigma=0.1975,
    epsilon=0.6768, alpha=0.5, omega=0.6524, rho=0.2266,
    gamma1=0.0588, gamma2=0.0704, gamma3=0.4810,
    phi1=1.7826e-5, phi2=5.0410e-3,
)

VARIANT_OMICRON = ModelParameters(
    Lambda=216.0, mu=2.4303e-5, beta=3.2493e-8, sigma=0.1975,
    epsilon=0.5745, alpha=0.5, omega=0.6524, rho=0.5266,
    gamma1=0.0588, gamma2=0.0537, gamma3=0.4149,
    phi1=1.7826e-5, phi2=5.0179e-3,
)

VARIANTS = {
    "614G": VARIANT_614G,
    "Alpha": VARIANT_ALPHA,
    "Delta": VARIANT_DELTA,
    "Omicron": VARIANT_OMICRON,
}
