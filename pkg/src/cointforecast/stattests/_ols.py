import numpy as np
from scipy.linalg import solve_triangular

RANK_RTOL = 1e-10


def qr_checked(X, rtol=RANK_RTOL):
    """Thin QR of ``X``; returns ``None`` for R's rank status when deficient."""
    q, r = np.linalg.qr(X)
    diag = np.abs(np.diag(r))
    full_rank = diag.size == 0 or diag.min() > rtol * diag.max()
    return q, r, full_rank


def ols(y, X):
    """Least squares by QR. Returns (beta, resid, ssr, se) or raises on rank loss."""
    from ..errors import DegenerateRegressionError

    q, r, full_rank = qr_checked(X)
    if not full_rank:
        raise DegenerateRegressionError("design matrix is rank deficient")
    beta = solve_triangular(r, q.T @ y)
    resid = y - X @ beta
    ssr = float(resid @ resid)
    n, k = X.shape
    rinv = solve_triangular(r, np.eye(k))
    se = np.sqrt(ssr / (n - k) * np.sum(rinv**2, axis=1))
    return beta, resid, ssr, se


def residualize(Y, Z):
    """Residuals of regressing every column of ``Y`` on ``Z`` (``Z`` may have 0 columns)."""
    if Z.shape[1] == 0:
        return Y
    q, _, full_rank = qr_checked(Z)
    if not full_rank:
        return None
    return Y - q @ (q.T @ Y)
