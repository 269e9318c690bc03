"""Response-surface p-values for the Dickey-Fuller tau statistic.

Coefficients are MacKinnon's (1994) approximate asymptotic distribution
functions for a single I(1) series: p = Phi(c0 + c1*tau + c2*tau**2 [+ c3*tau**3]),
with the quadratic used left of ``TAU_STAR`` and the cubic to its right.
"""
import numpy as np
from scipy.stats import norm

TAU_MIN = {"n": -19.04, "c": -18.83, "ct": -16.18}
TAU_MAX = {"n": np.inf, "c": 2.74, "ct": 0.7}
TAU_STAR = {"n": -1.04, "c": -1.61, "ct": -2.89}

SMALL_P = {
    "n": (0.6344, 1.2378, 3.2496e-2),
    "c": (2.1659, 1.4412, 3.8269e-2),
    "ct": (3.2512, 1.6047, 4.9588e-2),
}
LARGE_P = {
    "n": (0.4797, 9.3557e-1, -0.6999e-1, 3.3066e-2),
    "c": (1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2),
    "ct": (2.5261, 6.1654e-1, -3.7956e-1, -6.0285e-2),
}


def mackinnon_p(tau: float, regression: str = "c") -> float:
    if tau > TAU_MAX[regression]:
        return 1.0
    if tau < TAU_MIN[regression]:
        return 0.0
    coef = SMALL_P[regression] if tau <= TAU_STAR[regression] else LARGE_P[regression]
    return float(norm.cdf(np.polynomial.polynomial.polyval(tau, coef)))
