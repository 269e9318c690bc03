from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateRegressionError, InsufficientDataError
from ._mackinnon import mackinnon_p
from ._ols import ols

_KINDS = {
    "n": "n", "nc": "n", "none": "n", "no-constant": "n",
    "c": "c", "constant": "c",
    "ct": "ct", "constant+trend": "ct",
}
_N_TREND = {"n": 0, "c": 1, "ct": 2}


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    p_value: float
    lags_used: int
    n_obs: int
    regression_kind: str
    aic: float | None = None


def _design(x, dx, lags, start, kind):
    """Regressors for the rows ``dx[start:]``: deterministic terms, level, lagged diffs."""
    n = len(dx) - start
    cols = []
    if kind in ("c", "ct"):
        cols.append(np.ones(n))
    if kind == "ct":
        cols.append(np.arange(1.0, n + 1.0))
    cols.append(x[start : start + n])
    for i in range(1, lags + 1):
        cols.append(dx[start - i : start - i + n])
    return np.column_stack(cols), dx[start:]


def _aic(ssr, n, k):
    llf = -0.5 * n * (math.log(2 * math.pi) + math.log(ssr / n) + 1.0)
    return -2.0 * llf + 2.0 * k


def adf_test(series, max_lags: int | None = None, regression: str = "c",
             autolag: str | None = "aic") -> AdfResult:
    """Augmented Dickey-Fuller unit-root test.

    Regresses the first difference on the lagged level, ``k`` lagged
    differences and the deterministic terms of ``regression`` (``"n"``,
    ``"c"`` or ``"ct"``). With ``autolag="aic"`` the lag count is chosen by
    AIC over ``0..max_lags`` on a common sample, then the chosen model is
    refit on all available rows. With ``autolag=None`` exactly ``max_lags``
    lags are used.

    The statistic is the t-ratio of the lagged-level coefficient; its
    p-value comes from MacKinnon's response surface.
    """
    kind = _KINDS.get(regression)
    if kind is None:
        raise ValueError(f"unknown regression kind {regression!r}")
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if not np.isfinite(x).all():
        raise ValueError("series contains non-finite values")
    nobs = len(x)
    if nobs and x.max() == x.min():
        raise DegenerateRegressionError("series is constant")
    if max_lags is None:
        max_lags = int(math.ceil(12.0 * (nobs / 100.0) ** 0.25))
        max_lags = min(nobs // 2 - _N_TREND[kind] - 1, max_lags)
        if max_lags < 0:
            raise InsufficientDataError(f"series of length {nobs} is too short")
    if max_lags < 0:
        raise ValueError("max_lags must be nonnegative")
    if nobs < max_lags + 10:
        raise InsufficientDataError(f"need at least {max_lags + 10} observations, got {nobs}")

    dx = np.diff(x)
    aic_best = None
    lags = max_lags
    if autolag is not None:
        if autolag.lower() != "aic":
            raise ValueError(f"unsupported autolag {autolag!r}")
        best = None
        for k in range(max_lags + 1):
            X, y = _design(x, dx, k, max_lags, kind)
            _, _, ssr, _ = ols(y, X)
            score = _aic(ssr, len(y), X.shape[1])
            if best is None or score < best[0]:
                best = (score, k)
        aic_best, lags = best

    X, y = _design(x, dx, lags, lags, kind)
    if len(y) <= X.shape[1]:
        raise InsufficientDataError("too few observations for the regression")
    beta, _, ssr, se = ols(y, X)
    if ssr == 0.0:
        raise DegenerateRegressionError("regression fits perfectly; statistic undefined")
    level = _N_TREND[kind]
    stat = float(beta[level] / se[level])
    return AdfResult(
        statistic=stat,
        p_value=mackinnon_p(stat, kind),
        lags_used=lags,
        n_obs=len(y),
        regression_kind=kind,
        aic=aic_best,
    )
