"""Command-line entry point.

    cointforecast ingest   --config exp.ini
    cointforecast test     --config exp.ini
    cointforecast select   --config exp.ini
    cointforecast train    --config exp.ini [--seed N]
    cointforecast backtest --config exp.ini [--model PATH] [--mode literal|compounded]
    cointforecast grid     --config exp.ini [--cells SPEC] [--seed N] [--out DIR]

Every subcommand prints a tab-separated table and writes it under the
output directory.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .backtest import run_backtest
from .errors import CointForecastError, SingularMatrixError
from .experiment import ExperimentConfig, load_panel, parse_cells, run_grid
from .model import load_forecaster, predict, save_forecaster, train
from .selection import select
from .stattests import adf_test, johansen_pairwise
from .timeseries import chrono_split, make_windows


def _config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_file(args.config)
    changes = {}
    if getattr(args, "out", None):
        changes["output_dir"] = Path(args.out)
    if getattr(args, "mode", None):
        changes["mode"] = args.mode
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    return cfg.with_overrides(**changes) if changes else cfg


def _emit(text: str, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    sys.stdout.write(text)


def cmd_ingest(args):
    cfg = _config(args)
    panel = load_panel(cfg)
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    panel.to_csv(out / "aligned.csv")
    lines = ["ticker\tfirst\tlast\tn_days\trole"]
    for t in panel.tickers:
        role = "target" if t == panel.target else "candidate"
        lines.append(f"{t}\t{panel.dates[0]}\t{panel.dates[-1]}\t{panel.n_days}\t{role}")
    _emit("\n".join(lines) + "\n", out / "ingest.tsv")


def cmd_test(args):
    cfg = _config(args)
    panel = load_panel(cfg)
    target = panel.column(panel.target_index)
    lines = ["ticker\tadf_statistic\tadf_p_value\tadf_lags\tjohansen_trace_r0\tjohansen_p_value"]
    for t in panel.tickers:
        adf = adf_test(panel.column(t))
        if t == panel.target:
            trace, p = "-", "-"
        else:
            try:
                res = johansen_pairwise(target, panel.column(t), cfg.lag_order)
                trace, p = f"{res.trace_stats[0]:.4f}", f"{res.p_values[0]:.3f}"
            except SingularMatrixError:
                trace, p = "singular", "-"
        lines.append(f"{t}\t{adf.statistic:.4f}\t{adf.p_value:.3f}\t{adf.lags_used}\t{trace}\t{p}")
    _emit("\n".join(lines) + "\n", cfg.output_dir / "tests.tsv")


def cmd_select(args):
    cfg = _config(args)
    panel = load_panel(cfg)
    report = select(panel, cfg.selection, cfg.k, cfg.lag_order)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    (cfg.output_dir / "selection.json").write_text(report.to_json() + "\n")
    lines = [f"rank\tticker\t{report.scores_meaning}\tchosen"]
    for i, (t, s) in enumerate(report.ranked, 1):
        score = "-" if s is None else f"{s:.6f}"
        lines.append(f"{i}\t{t}\t{score}\t{'yes' if t in report.chosen else 'no'}")
    for t in report.excluded:
        lines.append(f"-\t{t}\tsingular\tno")
    _emit("\n".join(lines) + "\n", cfg.output_dir / "selection.tsv")


def _datasets(cfg, panel, features):
    ds = make_windows(panel, features, cfg.model.window_len)
    return chrono_split(ds, cfg.train_fraction)


def cmd_train(args):
    cfg = _config(args)
    panel = load_panel(cfg)
    report = select(panel, cfg.selection, cfg.k, cfg.lag_order)
    features = report.feature_columns()
    train_set, _ = _datasets(cfg, panel, features)
    model = train(cfg.model.replace(input_size=len(features)), train_set)
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    (out / "selection.json").write_text(report.to_json() + "\n")
    save_forecaster(model, out / "model.json")
    lines = ["epoch\tloss"]
    lines += [f"{i}\t{v:.8f}" for i, v in enumerate(model.training_loss_history, 1)]
    _emit("\n".join(lines) + "\n", out / "training_loss.tsv")


def cmd_backtest(args):
    cfg = _config(args)
    model_path = Path(args.model) if args.model else cfg.output_dir / "model.json"
    model = load_forecaster(model_path)
    panel = load_panel(cfg)
    _, test_set = _datasets(cfg, panel, list(model.feature_names))
    forecast = predict(model, test_set)
    result = run_backtest(forecast, threshold=cfg.threshold, mode=cfg.mode,
                          risk_free_rate=cfg.risk_free_rate)
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    forecast.to_csv(out / "forecast.csv")
    result.to_csv(out / "backtest_daily.csv")
    summary = result.summary()
    (out / "backtest.json").write_text(json.dumps(summary, indent=2) + "\n")
    lines = ["metric\tvalue"] + [f"{k}\t{v}" for k, v in summary.items()]
    _emit("\n".join(lines) + "\n", out / "backtest.tsv")


def cmd_grid(args):
    cfg = _config(args)
    cells = parse_cells(args.cells) if args.cells else None
    report = run_grid(cfg, cells, workers=args.workers)
    sys.stdout.write(report.table())
    return 0 if all(r.ok for r in report.rows) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cointforecast", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="experiment INI file")
        p.add_argument("--out", help="override the output directory")
        p.add_argument("--seed", type=int, help="override the model seed")
        p.add_argument("--mode", choices=("literal", "compounded"), help="cumulative-return mode")
        p.set_defaults(func=func)
        return p

    add("ingest", cmd_ingest, "validate and align the price files")
    add("test", cmd_test, "ADF and pairwise Johansen table")
    add("select", cmd_select, "rank candidate factors")
    add("train", cmd_train, "train one forecaster")
    p = add("backtest", cmd_backtest, "backtest a trained forecaster on the test split")
    p.add_argument("--model", help="model file (default: <out>/model.json)")
    p = add("grid", cmd_grid, "run the selection x loss x architecture grid")
    p.add_argument("--cells", help='"all" or e.g. cointegration+quantile+gru,all+rmse+lstm')
    p.add_argument("--workers", type=int, default=None, help="parallel cells")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args) or 0
    except (CointForecastError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
