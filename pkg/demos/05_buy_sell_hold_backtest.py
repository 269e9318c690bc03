"""
Buy-Sell-Hold backtest
======================

Each day the forecast move ``predicted / last close - 1`` is compared with
a 3% band: above it we go long, below it short, otherwise we stay flat.
Cumulative return is shown as a sum of daily gross returns ("literal") and
as their product ("compounded").
"""
# %%
import numpy as np

from cointforecast.backtest import run_backtest
from cointforecast.model import ForecastSeries

closes = np.array([100.0, 104.0, 101.0, 97.0, 97.5, 103.0, 102.0])
predicted = np.array([104.5, 100.0, 97.0, 97.0, 101.0, 102.5])
dates = tuple(f"2021-03-{d:02d}" for d in range(2, 8))
forecast = ForecastSeries(dates, predicted[:, None], closes[1:], predicted, closes[:-1])
result = run_backtest(forecast, actual_prices=closes)

print("date        V_D      position  g_n")
for d, v, p, g in zip(result.dates, result.deviations, result.positions, result.daily_returns):
    print(f"{d}  {v:+.4f}  {p:+d}        {g:.4f}")

# %%
for mode in ("literal", "compounded"):
    portfolio, baseline = result.cumulative(mode)
    print(f"{mode:10s} strategy {portfolio:.4f}   always long {baseline:.4f}")
print(f"Sharpe: strategy {result.sharpe_portfolio:.3f}, always long {result.sharpe_baseline:.3f}")
