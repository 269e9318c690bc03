"""Independent reference implementations used only by the tests."""
import numpy as np
import scipy.linalg


def johansen_trace_oracle(levels, lag_order=1, deterministic="restricted"):
    """Textbook Johansen trace statistics via the generalized eigenproblem.

    Residuals come from ``lstsq`` and eigenvalues from
    ``eigh(S10 S00^-1 S01, S11)``, which shares no code with the QR/SVD
    route in the package.
    """
    y = np.asarray(levels, dtype=float)
    T, m = y.shape
    dy = np.diff(y, axis=0)
    n = T - lag_order - 1
    z0 = dy[lag_order:]
    z1 = y[lag_order:-1]
    lagged = [dy[lag_order - i : lag_order - i + n] for i in range(1, lag_order + 1)]
    z2 = np.column_stack(lagged) if lagged else np.zeros((n, 0))
    if deterministic == "restricted":
        z1 = np.column_stack([z1, np.ones(n)])
    elif deterministic != "none":
        raise ValueError(deterministic)

    def resid(a):
        if z2.shape[1] == 0:
            return a
        coef, *_ = np.linalg.lstsq(z2, a, rcond=None)
        return a - z2 @ coef

    r0, r1 = resid(z0), resid(z1)
    s00 = r0.T @ r0 / n
    s01 = r0.T @ r1 / n
    s11 = r1.T @ r1 / n
    lhs = s01.T @ np.linalg.solve(s00, s01)
    lam = scipy.linalg.eigh(lhs, s11, eigvals_only=True)[::-1][:m]
    trace = np.array([-n * np.log1p(-lam[r:]).sum() for r in range(m)])
    return lam, trace


def johansen_r0_likelihood_ratio(levels, lag_order=1):
    """Rank-0 trace statistic of the restricted-constant model by direct regression.

    Under r = 0 the level term drops out, so the model regresses the
    differences on lagged differences only. Under full rank the levels and
    the constant enter freely. The statistic is n times the log ratio of
    the residual covariance determinants.
    """
    y = np.asarray(levels, dtype=float)
    T, m = y.shape
    dy = np.diff(y, axis=0)
    n = T - lag_order - 1
    z0 = dy[lag_order:]
    lagged = np.column_stack([dy[lag_order - i : lag_order - i + n] for i in range(1, lag_order + 1)])
    full = np.column_stack([y[lag_order:-1], np.ones(n), lagged])

    def logdet_resid(X):
        coef, *_ = np.linalg.lstsq(X, z0, rcond=None)
        e = z0 - X @ coef
        return np.linalg.slogdet(e.T @ e / n)[1]

    return n * (logdet_resid(lagged) - logdet_resid(full))


def brute_force_backtest(prev_close, predicted, closes, threshold=0.03):
    """Day-by-day loop mirroring a spreadsheet, one row per trading day."""
    rows = []
    for i in range(len(predicted)):
        v = predicted[i] / prev_close[i] - 1.0
        if v > threshold:
            pos = 1
        elif v < -threshold:
            pos = -1
        else:
            pos = 0
        r = np.log(closes[i] / prev_close[i])
        rows.append((v, pos, r, float(np.exp(pos * r))))
    total = 0.0
    product = 1.0
    for _, _, _, g in rows:
        total += g
        product *= g
    strat = [pos * r for _, pos, r, _ in rows]
    mean = sum(strat) / len(strat)
    var = sum((s - mean) ** 2 for s in strat) / (len(strat) - 1)
    return rows, total, product, mean / var ** 0.5
