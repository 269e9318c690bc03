"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

The lines are printed in the terminal summary under "acceptance criteria".
"""
import csv
import json
import math
import shutil
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from statsmodels.tsa.stattools import adfuller
from statsmodels.tsa.vector_ar.vecm import coint_johansen

from conftest import ar1, random_walk, record_criterion
from cointforecast.backtest import daily_return, run_backtest
from cointforecast.datasets import fixture_dir, synthetic_market, write_market
from cointforecast.experiment import ExperimentConfig, parse_cells, run_experiment, run_grid
from cointforecast.model import ModelConfig, gradient_check, quantile_loss
from cointforecast.model.training import network_for
from cointforecast.selection import select_by_cointegration
from cointforecast.stattests import adf_test, johansen_pairwise, johansen_trace
from cointforecast.timeseries import align_and_interpolate
from oracles import brute_force_backtest, johansen_trace_oracle
from test_backtest import forecast_from

pytestmark = pytest.mark.acceptance


def _criterion_1_cases():
    """Twenty length-500 pairs: five each of four families."""
    cases = []
    for s in range(5):
        cases.append(("random walk", np.column_stack([random_walk(500, s), random_walk(500, s + 500)])))
        noise = np.random.default_rng(100 + s).normal(size=(500, 2))
        cases.append(("white noise", noise))
        cases.append(("AR(1)", np.column_stack([ar1(500, 0.6, 200 + s), ar1(500, 0.3, 700 + s)])))
        y = random_walk(500, 300 + s)
        cases.append(("cointegrated", np.column_stack([y, 1.5 * y + ar1(500, 0.5, 800 + s)])))
    return cases


def test_criterion_1_statistical_oracle_equivalence():
    start = time.perf_counter()
    worst = {"adf_stat": 0.0, "adf_p": 0.0, "trace_rel": 0.0}
    for _, Y in _criterion_1_cases():
        for col in Y.T:
            ours = adf_test(col)
            stat, p, *_ = adfuller(col, autolag="AIC")
            worst["adf_stat"] = max(worst["adf_stat"], abs(ours.statistic - stat))
            worst["adf_p"] = max(worst["adf_p"], abs(ours.p_value - p))
        ref_none = coint_johansen(Y, -1, 1).lr1
        _, ref_restricted = johansen_trace_oracle(Y, 1, "restricted")
        for det, ref in (("none", ref_none), ("restricted", ref_restricted)):
            got = np.array(johansen_trace(Y, 1, det).trace_stats)
            worst["trace_rel"] = max(worst["trace_rel"], float(np.max(np.abs(got - ref) / np.abs(ref))))
    elapsed = time.perf_counter() - start
    ok = (worst["adf_stat"] < 1e-6 and worst["adf_p"] < 1e-3 and worst["trace_rel"] < 1e-4
          and elapsed < 30)
    detail = (f"max |ADF stat diff| {worst['adf_stat']:.2e}, max |ADF p diff| {worst['adf_p']:.2e}, "
              f"max trace rel diff {worst['trace_rel']:.2e}, {elapsed:.1f}s")
    record_criterion(1, ok, detail)
    assert ok, detail


def test_criterion_2_power_and_size():
    start = time.perf_counter()
    trials = 1000
    adf_rejects = 0
    joh_rejects = 0
    for i in range(trials):
        rng = np.random.default_rng(10_000 + i)
        if adf_test(rng.normal(size=500)).p_value < 0.05:
            adf_rejects += 1
        walks = np.cumsum(rng.normal(size=(500, 2)), axis=0)
        res = johansen_pairwise(walks[:, 0], walks[:, 1])
        if res.trace_stats[0] > res.critical_values_95[0]:
            joh_rejects += 1
    elapsed = time.perf_counter() - start
    adf_rate, joh_rate = adf_rejects / trials, joh_rejects / trials
    ok = adf_rate >= 0.95 and 0.03 <= joh_rate <= 0.08 and elapsed < 300
    detail = f"ADF white-noise rejection {adf_rate:.1%}, Johansen rank-0 size {joh_rate:.1%}, {elapsed:.1f}s"
    record_criterion(2, ok, detail)
    assert ok, detail


def test_criterion_3_gradient_correctness():
    start = time.perf_counter()
    errors = {}
    for arch in ("rnn", "lstm", "gru"):
        for loss in ("quantile", "rmse"):
            cfg = ModelConfig(architecture=arch, loss=loss, input_size=3)
            rng = np.random.default_rng(42)
            w = network_for(cfg).init_weights(rng)
            sample = (rng.uniform(0, 1, (cfg.window_len, 3)), rng.uniform(0, 1))
            errors[f"{arch}/{loss}"] = gradient_check(cfg, w, sample)
    elapsed = time.perf_counter() - start
    worst = max(errors.values())
    ok = worst < 1e-5 and elapsed < 60
    detail = f"max relative error {worst:.2e} over {len(errors)} combinations, {elapsed:.1f}s"
    record_criterion(3, ok, detail)
    assert ok, detail


def test_criterion_4_quantile_identities():
    seen = []

    @settings(max_examples=10_000, deadline=None, derandomize=True)
    @given(st.floats(0.0, 1.0, exclude_min=True, exclude_max=True),
           st.floats(-1e6, 1e6, allow_nan=False))
    def sweep(q, e):
        seen.append((q, e))
        predicted, actual = 0.0, e
        assert quantile_loss([predicted], actual, (0.5,)) == abs(e) / 2
        assert quantile_loss([predicted], actual, (q,)) >= 0.0
        assert quantile_loss([0.0], 1.0, (q,)) == q
        # decimal 0.1 is not a double; the exact value of the formula is 1 - q
        assert quantile_loss([0.0], -1.0, (q,)) == 1.0 - q

    sweep()
    ok = len(seen) >= 10_000
    ok = ok and quantile_loss([0.0], 1.0, (0.9,)) == 0.9
    ok = ok and quantile_loss([0.0], -1.0, (0.9,)) == 1.0 - 0.9
    detail = f"{len(seen)} random (q, e) pairs; identity, asymmetry, nonnegativity exact"
    record_criterion(4, ok, detail)
    assert ok, detail


def test_criterion_5_backtest_identities():
    rng = np.random.default_rng(5)
    checks = {}
    prices = 100 * np.exp(np.cumsum(rng.normal(0, 0.02, 31)))
    hold = run_backtest(forecast_from(prices, prices[:-1]))
    checks["all-hold literal == T"] = hold.cumulative("literal")[0] == 30.0
    checks["all-hold compounded == 1"] = hold.cumulative("compounded")[0] == 1.0
    long = run_backtest(forecast_from(prices, prices[:-1] * 2.0))
    checks["always-long == baseline"] = (
        np.array_equal(long.daily_returns, long.baseline_daily_returns)
        and long.cumulative("literal")[0] == long.cumulative("literal")[1]
        and long.cumulative("compounded")[0] == long.cumulative("compounded")[1]
    )
    rs = rng.normal(0, 0.5, 10_000)
    checks["g(-p)g(p) == 1"] = all(
        abs(daily_return(-p, r) * daily_return(p, r) - 1.0) <= 1e-12 for r in rs for p in (-1, 1))

    script_rng = np.random.default_rng(2024)
    path = 100 * np.exp(np.cumsum(np.r_[0.0, script_rng.normal(0, 0.03, 30)]))
    predicted = path[:-1] * (1 + script_rng.choice([-0.06, -0.035, -0.01, 0.0, 0.02, 0.031, 0.08], 30))
    res = run_backtest(forecast_from(path, predicted), actual_prices=path)
    rows, total, product, sharpe = brute_force_backtest(path[:-1], predicted, path[1:])
    ref = np.array(rows)
    checks["30-day scripted scenario"] = bool(
        np.all(np.abs(res.deviations - ref[:, 0]) <= 1e-10)
        and np.array_equal(res.positions, ref[:, 1].astype(int))
        and np.all(np.abs(res.log_returns - ref[:, 2]) <= 1e-10)
        and np.all(np.abs(res.daily_returns - ref[:, 3]) <= 1e-10)
        and abs(res.cumulative("literal")[0] - total) <= 1e-10
        and abs(res.cumulative("compounded")[0] - product) <= 1e-10
        and abs(res.sharpe_portfolio - sharpe) <= 1e-10
    )
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    detail = "all identities hold" if ok else f"failed: {', '.join(failed)}"
    record_criterion(5, ok, detail)
    assert ok, detail


def _fixture_copy(tmp_path):
    data = tmp_path / "data"
    shutil.copytree(fixture_dir(), data)
    return ExperimentConfig.from_file(data / "fixture.ini")


def test_criterion_6_determinism(tmp_path):
    cfg = _fixture_copy(tmp_path)
    first = run_grid(cfg.with_overrides(output_dir=tmp_path / "a"))
    second = run_grid(cfg.with_overrides(output_dir=tmp_path / "b"))
    body_a = (tmp_path / "a" / "grid.json").read_bytes()
    body_b = (tmp_path / "b" / "grid.json").read_bytes()
    ok = body_a == body_b and first.body() == second.body() and len(first.rows) == 12
    detail = f"12-cell grid run twice, report bodies {'identical' if ok else 'differ'} ({len(body_a)} bytes)"
    record_criterion(6, ok, detail)
    assert ok, detail


SEEDS = range(10)
ARCHS = ("lstm", "gru")


def test_criterion_7_end_to_end_qualitative(tmp_path):
    start = time.perf_counter()
    recovered = 0
    wins = {arch: 0 for arch in ARCHS}
    lines = []
    for seed in SEEDS:
        market = synthetic_market(n_days=600, n_linked=2, n_independent=4, seed=seed)
        data = write_market(market, tmp_path / f"m{seed}")
        tickers = [s.ticker for s in market]
        panel = align_and_interpolate(market)
        chosen = select_by_cointegration(panel, k=2).chosen
        recovered += sorted(chosen) == ["LINK1", "LINK2"]
        cfg = ExperimentConfig(data_dir=data, target_ticker=tickers[0],
                               candidate_tickers=tickers[1:], output_dir=tmp_path / f"r{seed}",
                               k=2, model=ModelConfig(seed=seed))
        for arch in ARCHS:
            cells = parse_cells(f"cointegration+quantile+{arch},all+rmse+{arch}")
            cq, ar = (run_experiment(cfg.with_overrides(selection=c.selection, loss=c.loss,
                                                        architecture=c.architecture), panel)
                      for c in cells)
            wins[arch] += cq.cumulative_compounded >= ar.cumulative_compounded
            lines.append(f"{seed}/{arch}: {cq.cumulative_compounded:.3f} vs {ar.cumulative_compounded:.3f}")
    elapsed = time.perf_counter() - start
    print("\n".join(lines))
    ok = recovered == len(SEEDS) and all(w >= 7 for w in wins.values()) and elapsed < 600
    detail = (f"selection recovered linked pair in {recovered}/10 markets; "
              f"Cointegration+Quantile >= All+RMSE (compounded) in "
              + ", ".join(f"{w}/10 {a.upper()}" for a, w in wins.items())
              + f"; {elapsed:.0f}s")
    record_criterion(7, ok, detail)
    assert ok, detail


def test_criterion_8_pipeline_smoke(tmp_path):
    cfg = _fixture_copy(tmp_path).with_overrides(output_dir=tmp_path / "runs")
    start = time.perf_counter()
    report = run_grid(cfg)
    elapsed = time.perf_counter() - start
    problems = []
    with open(tmp_path / "runs" / "grid.tsv") as fh:
        table = list(csv.reader(fh, delimiter="\t"))
    if len(table) != 13:
        problems.append("grid.tsv rows")
    meta = json.loads((tmp_path / "runs" / "grid.json").read_text())
    if len(meta["rows"]) != 12:
        problems.append("grid.json rows")
    for row in report.rows:
        if not row.ok:
            problems.append(f"{row.label}: {row.status}")
            continue
        d = tmp_path / "runs" / row.label
        for name in ("selection.json", "model.json", "backtest.json", "row.json"):
            json.loads((d / name).read_text())
        for name in ("forecast.csv", "backtest_daily.csv"):
            with open(d / name) as fh:
                rows = list(csv.DictReader(fh))
            if len(rows) != row.n_days or not all(math.isfinite(float(r["actual" if name == "forecast.csv"
                                                                           else "daily_return"]))
                                                  for r in rows):
                problems.append(f"{row.label}/{name}")
    ok = not problems and elapsed < 900
    detail = f"12 cells in {elapsed:.1f}s, artifacts parsed" if ok else f"problems: {problems}"
    record_criterion(8, ok, detail)
    assert ok, detail
