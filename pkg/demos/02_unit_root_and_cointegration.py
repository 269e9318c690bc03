"""
Unit roots, cointegration and correlation
=========================================

The augmented Dickey-Fuller test asks whether a series has a unit root.
The Johansen trace test asks whether two non-stationary series share a
stochastic trend. Both return p-values; small means "reject".
"""
# %%
import numpy as np

from cointforecast.stattests import adf_test, johansen_pairwise, pearson_correlation

rng = np.random.default_rng(1)
walk = np.cumsum(rng.normal(size=500))
noise = rng.normal(size=500)
for name, series in (("random walk", walk), ("white noise", noise)):
    res = adf_test(series)
    print(f"{name:12s} ADF={res.statistic:7.3f}  p={res.p_value:.4f}  lags={res.lags_used}")

# %%
# A noisy affine copy of the walk is cointegrated with it; an unrelated
# walk is not.
partner = 2.0 + 0.5 * walk + rng.normal(scale=0.5, size=500)
stranger = np.cumsum(rng.normal(size=500))
for name, x in (("noisy copy", partner), ("unrelated walk", stranger)):
    res = johansen_pairwise(walk, x)
    print(f"{name:15s} trace(r=0)={res.trace_stats[0]:7.2f}  "
          f"5% cv={res.critical_values_95[0]:.2f}  p={res.p_values[0]:.3f}")

# %%
# Pearson correlation on levels. Two independent random walks often look
# strongly correlated, which is why cointegration is the more careful screen.
print("corr(walk, noisy copy)     =", round(pearson_correlation(walk, partner), 3))
print("corr(walk, unrelated walk) =", round(pearson_correlation(walk, stranger), 3))
