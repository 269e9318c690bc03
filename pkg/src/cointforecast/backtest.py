"""Buy-Sell-Hold backtest of next-day forecasts.

Each day the predicted fractional move ``predicted / last_close - 1`` is
mapped to a position in {-1, 0, +1} through a symmetric threshold band.
That position earns ``exp(position * r)``, where ``r`` is the realised log
return from the last close to the forecast day. Cumulative return is
reported two ways: ``"literal"`` sums the daily gross returns, while
``"compounded"`` multiplies them.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError, UndefinedSharpeError
from .model.training import ForecastSeries

MODES = ("literal", "compounded")
DEFAULT_THRESHOLD = 0.03


def _check_mode(mode):
    if mode == "paper-literal":
        return "literal"
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    return mode


def position(v_d: float, threshold: float = DEFAULT_THRESHOLD) -> int:
    if not math.isfinite(v_d):
        raise DomainError(f"deviation must be finite, got {v_d}")
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    if v_d > threshold:
        return 1
    if v_d < -threshold:
        return -1
    return 0


def positions(deviations, threshold: float = DEFAULT_THRESHOLD) -> np.ndarray:
    return np.array([position(float(v), threshold) for v in deviations], dtype=int)


def deviations(forecast: ForecastSeries) -> np.ndarray:
    """Predicted next-day move relative to the last observed close."""
    pred = np.asarray(forecast.point_estimate, dtype=float)
    prev = np.asarray(forecast.previous_actual, dtype=float)
    if len(pred) == 0:
        raise ValueError("empty forecast")
    if (prev <= 0).any() or (pred <= 0).any():
        raise DomainError("prices must be strictly positive")
    return pred / prev - 1.0


def daily_return(position: int, log_return: float) -> float:
    return math.exp(position * log_return)


def cumulative_return(daily_returns, mode: str = "compounded") -> float:
    mode = _check_mode(mode)
    g = np.asarray(daily_returns, dtype=float)
    if g.size == 0:
        raise ValueError("no daily returns")
    if mode == "literal":
        return float(g.sum())
    return float(np.prod(g))


def baseline_cumulative(log_returns, mode: str = "compounded") -> float:
    """Always-long benchmark on the same days."""
    r = np.asarray(log_returns, dtype=float)
    if r.size == 0:
        raise ValueError("no returns")
    return cumulative_return(np.exp(r), mode)


def sharpe_ratio(period_returns, risk_free_rate: float = 0.0) -> float:
    """Unannualised Sharpe ratio with the n-1 standard deviation."""
    r = np.asarray(period_returns, dtype=float)
    if r.size < 2:
        raise ValueError("need at least two returns")
    sd = r.std(ddof=1)
    # differences at machine-epsilon level are not variance
    if sd <= 1e-15 * max(1.0, float(np.abs(r).max())):
        raise UndefinedSharpeError("zero standard deviation")
    return float((r.mean() - risk_free_rate) / sd)


def _sharpe_or_nan(r, rf):
    try:
        return sharpe_ratio(r, rf)
    except UndefinedSharpeError:
        return math.nan


@dataclass(frozen=True)
class BacktestResult:
    dates: tuple
    deviations: np.ndarray
    positions: np.ndarray
    log_returns: np.ndarray
    daily_returns: np.ndarray
    cumulative_portfolio: float
    cumulative_baseline: float
    sharpe_portfolio: float
    sharpe_baseline: float
    mode: str
    threshold: float = DEFAULT_THRESHOLD
    risk_free_rate: float = 0.0

    @property
    def n_days(self) -> int:
        return len(self.daily_returns)

    @property
    def baseline_daily_returns(self) -> np.ndarray:
        return np.exp(self.log_returns)

    def cumulative(self, mode: str) -> tuple:
        """(portfolio, baseline) cumulative return in either mode."""
        return (
            cumulative_return(self.daily_returns, mode),
            baseline_cumulative(self.log_returns, mode),
        )

    def summary(self) -> dict:
        lit = self.cumulative("literal")
        comp = self.cumulative("compounded")
        return {
            "n_days": self.n_days,
            "mode": self.mode,
            "threshold": self.threshold,
            "risk_free_rate": self.risk_free_rate,
            "cumulative_portfolio_literal": lit[0],
            "cumulative_portfolio_compounded": comp[0],
            "cumulative_baseline_literal": lit[1],
            "cumulative_baseline_compounded": comp[1],
            "sharpe_portfolio": None if math.isnan(self.sharpe_portfolio) else self.sharpe_portfolio,
            "sharpe_baseline": None if math.isnan(self.sharpe_baseline) else self.sharpe_baseline,
            "n_buy": int((self.positions == 1).sum()),
            "n_sell": int((self.positions == -1).sum()),
            "n_hold": int((self.positions == 0).sum()),
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["date", "deviation", "position", "log_return", "daily_return"])
            for row in zip(self.dates, self.deviations, self.positions, self.log_returns, self.daily_returns):
                d, v, p, r, g = row
                w.writerow([d, repr(float(v)), int(p), repr(float(r)), repr(float(g))])


def run_backtest(forecast: ForecastSeries, actual_prices=None, threshold: float = DEFAULT_THRESHOLD,
                 mode: str = "compounded", risk_free_rate: float = 0.0) -> BacktestResult:
    """Trade every forecast day and score the result.

    ``actual_prices`` has one more entry than the forecast: the close before
    the first forecast day followed by the close of each forecast day. When
    omitted it is rebuilt from the forecast itself. The position on day ``n``
    depends only on the forecast for ``n`` and the close of day ``n - 1``.
    """
    mode = _check_mode(mode)
    n = len(forecast)
    if actual_prices is None:
        prices = np.concatenate([[forecast.previous_actual[0]], forecast.actual])
    else:
        prices = np.asarray(actual_prices, dtype=float)
        if prices.shape != (n + 1,):
            raise ShapeError(f"expected {n + 1} actual prices for {n} forecast days, got {prices.shape}")
        if not (np.allclose(prices[1:], forecast.actual, rtol=1e-12, atol=0)
                and np.allclose(prices[:-1], forecast.previous_actual, rtol=1e-12, atol=0)):
            raise ShapeError("actual prices are not aligned with the forecast days")
    if (prices <= 0).any():
        raise DomainError("prices must be strictly positive")
    v_d = np.asarray(forecast.point_estimate, dtype=float) / prices[:-1] - 1.0
    pos = positions(v_d, threshold)
    r = np.diff(np.log(prices))
    g = np.exp(pos * r)
    return BacktestResult(
        dates=tuple(forecast.dates),
        deviations=v_d,
        positions=pos,
        log_returns=r,
        daily_returns=g,
        cumulative_portfolio=cumulative_return(g, mode),
        cumulative_baseline=baseline_cumulative(r, mode),
        sharpe_portfolio=_sharpe_or_nan(pos * r, risk_free_rate),
        sharpe_baseline=_sharpe_or_nan(r, risk_free_rate),
        mode=mode,
        threshold=threshold,
        risk_free_rate=risk_free_rate,
    )
