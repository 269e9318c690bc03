"""Seeded synthetic markets with a known cointegration structure.

A latent common trend ``W`` follows a geometric random walk. The target
trades one day behind it with heavy-tailed noise,
``S_t = W_{t-1} * (1 + noise_t)``, where the noise is Gaussian plus rare
one-day jumps of fixed size and random sign. "Linked" candidates are affine in the
trend plus stationary AR(1) noise, so each is cointegrated with the target
and knows today's trend level, which makes tomorrow's target predictable.
"Independent" candidates are unrelated geometric random walks.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .timeseries import PriceSeries, write_csv

TARGET = "SPX"
FIXTURE_TICKERS = ("SPX", "LINK1", "LINK2", "WALK1", "WALK2")


def business_days(start: str, n: int) -> list:
    days = np.arange(np.datetime64(start, "D"), np.datetime64(start, "D") + 2 * n + 7)
    days = days[np.is_busday(days)][:n]
    return [str(d) for d in days]


def synthetic_market(n_days: int = 600, n_linked: int = 2, n_independent: int = 4, seed: int = 0,
                     start: str = "2018-03-05", trend_vol: float = 0.012,
                     target_noise: float = 0.02, jump_prob: float = 0.02,
                     jump_size: float = 0.2, walk_vol: float = 0.03,
                     walk_drift: float = 0.003) -> list:
    """Return ``[target, linked..., independent...]`` as :class:`PriceSeries`."""
    rng = np.random.default_rng(seed)
    dates = business_days(start, n_days)
    trend = 100.0 * np.exp(np.cumsum(rng.normal(0.0, trend_vol, n_days + 1)))
    noise = target_noise * rng.standard_normal(n_days)
    jumps = rng.random(n_days) < jump_prob
    noise[jumps] += jump_size * rng.choice([-1.0, 1.0], jumps.sum())
    target = trend[:-1] * (1.0 + noise)
    target = np.maximum(target, 1e-3 * trend[:-1])
    level = trend[1:]
    out = [PriceSeries(TARGET, dates, target)]
    for j in range(n_linked):
        scale = rng.uniform(0.5, 3.0)
        offset = rng.uniform(20.0, 200.0)
        u = np.zeros(n_days)
        shocks = rng.normal(0.0, 0.3, n_days)
        for t in range(1, n_days):
            u[t] = 0.5 * u[t - 1] + shocks[t]
        out.append(PriceSeries(f"LINK{j + 1}", dates, offset + scale * level + u))
    for j in range(n_independent):
        p0 = rng.uniform(20.0, 500.0)
        drift = walk_drift * rng.choice([-1.0, 1.0])
        walk = p0 * np.exp(np.cumsum(rng.normal(drift, walk_vol, n_days)))
        out.append(PriceSeries(f"WALK{j + 1}", dates, walk))
    return out


def write_market(series, directory) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for s in series:
        write_csv(s, directory / f"{s.ticker}.csv")
    return directory


def fixture_dir() -> Path:
    """Directory of the bundled 5-ticker, 120-day fixture CSVs."""
    return Path(str(resources.files("cointforecast.data").joinpath("fixture")))


def regenerate_fixture(directory=None) -> Path:
    series = synthetic_market(n_days=120, n_linked=2, n_independent=2, seed=7)
    return write_market(series, directory or fixture_dir())
