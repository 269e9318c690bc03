from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientDataError, SingularMatrixError
from ._ols import qr_checked, residualize
from .tables import trace_table

DETERMINISTIC = ("restricted", "none")
MAX_SERIES = 5  # extent of the bundled critical-value table


@dataclass(frozen=True)
class JohansenResult:
    eigenvalues: tuple
    trace_stats: tuple
    critical_values_95: tuple
    p_values: tuple
    lag_order: int
    n_obs: int
    deterministic: str


def _canonical_eigenvalues(r0, r1):
    """Squared canonical correlations between the columns of r0 and r1."""
    q0, _, ok0 = qr_checked(r0)
    q1, _, ok1 = qr_checked(r1)
    if not (ok0 and ok1):
        raise SingularMatrixError("moment matrix is singular (collinear series)")
    sv = np.linalg.svd(q0.T @ q1, compute_uv=False)
    return np.sort(sv**2)[::-1]


def johansen_trace(levels, lag_order: int = 1, deterministic: str = "restricted") -> JohansenResult:
    """Johansen trace test on the columns of ``levels`` (``T x p``, p <= 5).

    The error-correction model regresses ``dy_t`` on ``y_{t-1}`` (augmented
    with a constant inside the cointegrating relation when
    ``deterministic="restricted"``) and ``lag_order`` lagged differences.
    Both sides are first purged of the lagged differences; the eigenvalues
    are the squared canonical correlations of the two residual blocks.
    """
    if deterministic not in DETERMINISTIC:
        raise ValueError(f"deterministic must be one of {DETERMINISTIC}")
    if lag_order < 0:
        raise ValueError("lag_order must be nonnegative")
    Y = np.asarray(levels, dtype=float)
    if Y.ndim != 2:
        raise ValueError("levels must be a 2-d array")
    T, p = Y.shape
    if not 1 <= p <= MAX_SERIES:
        raise ValueError(f"critical values cover 1 to {MAX_SERIES} series, got {p}")
    if T < 20 + lag_order:
        raise InsufficientDataError(f"need at least {20 + lag_order} observations, got {T}")
    if not np.isfinite(Y).all():
        raise ValueError("levels contain non-finite values")

    dY = np.diff(Y, axis=0)
    n = T - 1 - lag_order
    z0 = dY[lag_order:]
    z1 = Y[lag_order:-1]
    z2 = np.hstack([dY[lag_order - j : lag_order - j + n] for j in range(1, lag_order + 1)]) \
        if lag_order else np.empty((n, 0))
    if deterministic == "restricted":
        z1 = np.hstack([z1, np.ones((n, 1))])

    r0 = residualize(z0, z2)
    r1 = residualize(z1, z2)
    if r0 is None or r1 is None:
        raise SingularMatrixError("lagged differences are collinear")
    lam = _canonical_eigenvalues(r0, r1)[:p]
    if lam[0] >= 1.0 - 1e-12:
        raise SingularMatrixError("perfect canonical correlation")
    lam = np.clip(lam, 0.0, None)

    logs = np.log1p(-lam)
    trace = [float(-n * logs[r:].sum()) for r in range(p)]
    table = trace_table()
    cv95 = [table.critical_value(deterministic, p - r, 0.05) for r in range(p)]
    pvals = [table.p_value(deterministic, p - r, trace[r]) for r in range(p)]
    return JohansenResult(
        eigenvalues=tuple(float(v) for v in lam),
        trace_stats=tuple(trace),
        critical_values_95=tuple(cv95),
        p_values=tuple(pvals),
        lag_order=lag_order,
        n_obs=n,
        deterministic=deterministic,
    )


def johansen_pairwise(y, x, lag_order: int = 1, deterministic: str = "restricted") -> JohansenResult:
    """Bivariate Johansen trace test of ``y`` against ``x``."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if y.shape != x.shape or y.ndim != 1:
        raise ValueError("y and x must be 1-d and of equal length")
    return johansen_trace(np.column_stack([y, x]), lag_order, deterministic)
