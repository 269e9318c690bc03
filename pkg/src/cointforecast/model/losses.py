"""Pinball (quantile) and RMSE losses, scalar forms and batch forms with gradients."""
from __future__ import annotations

import numpy as np

from ..errors import DomainError

DEFAULT_QUANTILES = (0.1, 0.5, 0.9)


def _check_quantiles(quantiles):
    q = np.asarray(quantiles, dtype=float)
    if q.ndim != 1 or q.size == 0 or np.any(q <= 0.0) or np.any(q >= 1.0):
        raise ValueError("quantiles must be a nonempty list of values in (0, 1)")
    return q


def pinball(error, q):
    """Per-quantile loss ``max((q - 1) e, q e)`` with ``e = actual - predicted``."""
    return np.maximum((q - 1.0) * error, q * error)


def quantile_loss(predicted, actual, quantiles=DEFAULT_QUANTILES) -> float:
    """Mean pinball loss over the quantiles for one observation."""
    q = _check_quantiles(quantiles)
    predicted = np.asarray(predicted, dtype=float)
    if predicted.shape != q.shape:
        raise ValueError(f"{q.size} quantiles but {predicted.size} predictions")
    return float(np.mean(pinball(float(actual) - predicted, q)))


def rmse_loss(predicted, actual) -> float:
    predicted = np.asarray(predicted, dtype=float).ravel()
    actual = np.asarray(actual, dtype=float).ravel()
    if predicted.size == 0 or predicted.shape != actual.shape:
        raise DomainError("rmse needs equal, nonzero-length inputs")
    err = actual - predicted
    return float(np.sqrt(np.mean(err * err)))


def quantile_loss_grad(outputs, targets, quantiles):
    """Batch-mean pinball loss for ``outputs (B, Q)`` and its gradient."""
    q = np.asarray(quantiles, dtype=float)
    err = targets[:, None] - outputs
    loss = pinball(err, q).mean()
    # subgradient at a kink: midpoint of the two one-sided slopes
    slope = np.where(err > 0, -q, np.where(err < 0, 1.0 - q, 0.5 - q))
    return float(loss), slope / err.size


def rmse_loss_grad(outputs, targets):
    err = targets - outputs[:, 0]
    loss = np.sqrt(np.mean(err * err))
    if loss == 0.0:
        return 0.0, np.zeros_like(outputs)
    return float(loss), (-err / (err.size * loss))[:, None]
