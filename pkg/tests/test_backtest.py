import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cointforecast.backtest import (
    baseline_cumulative,
    cumulative_return,
    daily_return,
    deviations,
    position,
    positions,
    run_backtest,
    sharpe_ratio,
)
from cointforecast.errors import DomainError, ShapeError, UndefinedSharpeError
from cointforecast.model import ForecastSeries
from oracles import brute_force_backtest


def forecast_from(prices, predicted):
    """Forecast for days 1..n of ``prices`` (day 0 is the first reference close)."""
    prices = np.asarray(prices, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    n = len(predicted)
    dates = tuple(str(np.datetime64("2021-01-01") + i) for i in range(1, n + 1))
    return ForecastSeries(dates, predicted[:, None], prices[1:], predicted, prices[:-1])


class TestPosition:
    def test_examples(self):
        assert position(0.05, 0.03) == 1
        assert position(0.0) == 0
        assert position(-0.05) == -1
        assert position(0.03) == 0 and position(-0.03) == 0

    def test_non_finite(self):
        with pytest.raises(DomainError):
            position(math.nan)

    def test_deviations(self):
        prices = [100.0, 101.0, 102.0, 103.0]
        fc = forecast_from(prices, [100.0, 1.05 * 101.0, 0.96 * 102.0])
        v = deviations(fc)
        np.testing.assert_allclose(v, [0.0, 0.05, -0.04], atol=1e-15)
        assert positions(v).tolist() == [0, 1, -1]

    def test_deviation_domain(self):
        with pytest.raises(DomainError):
            deviations(forecast_from([0.0, 1.0], [1.0]))


class TestReturns:
    def test_daily(self):
        assert daily_return(0, 0.7) == 1.0
        assert daily_return(1, math.log(1.02)) == pytest.approx(1.02, abs=1e-15)
        assert daily_return(-1, math.log(1.02)) == pytest.approx(1 / 1.02, abs=1e-15)

    def test_cumulative(self):
        assert cumulative_return([1.0] * 10, "literal") == 10.0
        assert cumulative_return([1.0] * 10, "compounded") == 1.0
        assert cumulative_return([1.1, 0.9], "compounded") == pytest.approx(0.99, abs=1e-15)
        assert cumulative_return([1.0] * 3, "paper-literal") == 3.0

    def test_baseline(self):
        assert baseline_cumulative([0.0] * 5, "literal") == 5.0
        assert baseline_cumulative([math.log(1.01)] * 2, "compounded") == pytest.approx(1.0201, abs=1e-14)
        for mode in ("literal", "compounded"):
            assert baseline_cumulative([math.log(2.0)], mode) == pytest.approx(2.0, abs=1e-15)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            cumulative_return([1.0], "average")


class TestSharpe:
    def test_undefined(self):
        with pytest.raises(UndefinedSharpeError):
            sharpe_ratio([0.01, 0.01])

    def test_value(self):
        assert sharpe_ratio([0.02, 0.0]) == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 10_000), st.floats(1e-3, 1e3))
    def test_scale_invariant(self, seed, a):
        x = np.random.default_rng(seed).normal(size=20)
        assert sharpe_ratio(a * x) == pytest.approx(sharpe_ratio(x), rel=1e-10)


class TestRunBacktest:
    def test_perfect_foresight_on_rising_series(self):
        prices = 100 * 1.04 ** np.arange(11)
        res = run_backtest(forecast_from(prices, prices[1:]))
        assert (res.positions == 1).all()
        assert res.cumulative_portfolio == res.cumulative_baseline
        np.testing.assert_array_equal(res.daily_returns, res.baseline_daily_returns)

    def test_all_hold(self):
        prices = 100 + np.random.default_rng(0).normal(size=11)
        res = run_backtest(forecast_from(prices, prices[:-1]))
        assert (res.positions == 0).all()
        assert res.cumulative("compounded")[0] == 1.0
        assert res.cumulative("literal")[0] == 10.0
        assert math.isnan(res.sharpe_portfolio)
        assert res.summary()["sharpe_portfolio"] is None

    def test_actual_prices_must_align(self):
        prices = [100.0, 101.0, 99.0]
        fc = forecast_from(prices, [100.0, 100.0])
        run_backtest(fc, actual_prices=prices)
        with pytest.raises(ShapeError):
            run_backtest(fc, actual_prices=prices[:2])
        with pytest.raises(ShapeError):
            run_backtest(fc, actual_prices=[100.0, 101.0, 98.0])

    def test_scripted_thirty_days(self, tmp_path):
        rng = np.random.default_rng(2024)
        prices = 100 * np.exp(np.cumsum(np.r_[0.0, rng.normal(0, 0.03, 30)]))
        script = rng.choice([-0.06, -0.035, -0.01, 0.0, 0.02, 0.031, 0.08], 30)
        predicted = prices[:-1] * (1 + script)
        res = run_backtest(forecast_from(prices, predicted), actual_prices=prices)
        rows, total, product, sharpe = brute_force_backtest(prices[:-1], predicted, prices[1:])
        assert res.n_days == 30
        for i, (v, pos, r, g) in enumerate(rows):
            assert res.deviations[i] == pytest.approx(v, abs=1e-10)
            assert res.positions[i] == pos
            assert res.log_returns[i] == pytest.approx(r, abs=1e-10)
            assert res.daily_returns[i] == pytest.approx(g, abs=1e-10)
        lit, comp = res.cumulative("literal")[0], res.cumulative("compounded")[0]
        assert lit == pytest.approx(total, abs=1e-10)
        assert comp == pytest.approx(product, abs=1e-10)
        assert res.sharpe_portfolio == pytest.approx(sharpe, abs=1e-10)
        assert {-1, 0, 1} <= set(res.positions.tolist())
        res.to_csv(tmp_path / "daily.csv")
        lines = (tmp_path / "daily.csv").read_text().splitlines()
        assert lines[0] == "date,deviation,position,log_return,daily_return"
        assert len(lines) == 31


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 18))
def test_no_look_ahead(seed, day):
    rng = np.random.default_rng(seed)
    prices = 100 * np.exp(np.cumsum(rng.normal(0, 0.03, 21)))
    predicted = prices[:-1] * (1 + rng.normal(0, 0.05, 20))
    base = run_backtest(forecast_from(prices, predicted))
    future = prices.copy()
    future[day + 2:] = rng.permutation(future[day + 2:])
    changed = run_backtest(forecast_from(future, predicted))
    assert changed.positions[: day + 1].tolist() == base.positions[: day + 1].tolist()


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([-1, 1]), st.floats(-1.0, 1.0))
def test_opposite_positions_cancel(p, r):
    assert daily_return(-p, r) * daily_return(p, r) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 40))
def test_always_long_equals_baseline(seed, n):
    rng = np.random.default_rng(seed)
    prices = 100 * np.exp(np.cumsum(rng.normal(0, 0.02, n + 1)))
    res = run_backtest(forecast_from(prices, prices[:-1] * 1.5))
    np.testing.assert_array_equal(res.daily_returns, res.baseline_daily_returns)
    for mode in ("literal", "compounded"):
        a, b = res.cumulative(mode)
        assert a == b
    assert (res.daily_returns > 0).all()
