"""Config-driven experiment runner: selection x loss x architecture grid.

One cell runs ingest -> select -> window -> split -> train -> predict ->
backtest and writes its artifacts to ``<output_dir>/<cell label>/``. A
grid runs many cells on the same aligned panel and collects one summary
row per cell.
"""
from __future__ import annotations

import configparser
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from . import __version__
from .backtest import run_backtest
from .errors import ConfigError, StageError
from .model import ModelConfig, predict, save_forecaster, train
from .selection import DEFAULT_K, METHODS, select
from .timeseries import AlignedPanel, align_and_interpolate, chrono_split, load_csv, make_windows

SELECTION_LABELS = {"all": "All", "correlation": "Correlation", "cointegration": "Cointegration"}
LOSS_LABELS = {"quantile": "Quantile", "rmse": "RMSE"}
ARCH_LABELS = {"lstm": "LSTM", "gru": "GRU", "rnn": "RNN"}


@dataclass(frozen=True)
class Cell:
    selection: str
    loss: str
    architecture: str
    seed: int | None = None

    def __post_init__(self):
        if self.selection not in SELECTION_LABELS:
            raise ConfigError(f"unknown selection {self.selection!r}")
        if self.loss not in LOSS_LABELS:
            raise ConfigError(f"unknown loss {self.loss!r}")
        if self.architecture not in ARCH_LABELS:
            raise ConfigError(f"unknown architecture {self.architecture!r}")

    @property
    def label(self) -> str:
        base = "+".join(
            (SELECTION_LABELS[self.selection], LOSS_LABELS[self.loss], ARCH_LABELS[self.architecture])
        )
        return base if self.seed is None else f"{base}@{self.seed}"


def grid_cells() -> list:
    """All twelve cells, Quantile rows first, then All/Correlation/Cointegration, then LSTM/GRU."""
    cells = []
    for loss in ("quantile", "rmse"):
        for sel in ("all", "correlation", "cointegration"):
            for arch in ("lstm", "gru"):
                cells.append(Cell(sel, loss, arch))
    return cells


def parse_cells(spec: str) -> list:
    """``"all"`` or comma-separated ``selection+loss+arch[@seed]`` items.

    Separators ``+`` and ``:`` are both accepted; matching is case-insensitive.
    """
    spec = spec.strip()
    if spec.lower() in ("all", ""):
        return grid_cells()
    cells = []
    for item in spec.split(","):
        item = item.strip().lower()
        seed = None
        if "@" in item:
            item, seed_text = item.split("@", 1)
            seed = int(seed_text)
        parts = item.replace(":", "+").split("+")
        if len(parts) != 3:
            raise ConfigError(f"cell {item!r} is not selection+loss+architecture")
        cells.append(Cell(*parts, seed=seed))
    return cells


@dataclass(frozen=True)
class ExperimentConfig:
    data_dir: Path
    target_ticker: str
    candidate_tickers: tuple
    output_dir: Path = Path("runs")
    start: str | None = None
    end: str | None = None
    calendar: str = "intersection"
    selection: str = "cointegration"
    k: int = DEFAULT_K
    lag_order: int = 1
    model: ModelConfig = field(default_factory=ModelConfig)
    threshold: float = 0.03
    mode: str = "compounded"
    risk_free_rate: float = 0.0
    train_fraction: float = 0.8
    cells: tuple = ()
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "data_dir", Path(self.data_dir))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        object.__setattr__(self, "candidate_tickers", tuple(self.candidate_tickers))
        if self.target_ticker in self.candidate_tickers:
            raise ConfigError("target ticker must not be listed among the candidates")
        if self.selection not in METHODS:
            raise ConfigError(f"selection must be one of {METHODS}")
        if self.mode not in ("literal", "compounded"):
            raise ConfigError("mode must be 'literal' or 'compounded'")

    @property
    def tickers(self) -> list:
        return [self.target_ticker, *self.candidate_tickers]

    def csv_path(self, ticker: str) -> Path:
        return self.data_dir / f"{ticker}.csv"

    def missing_files(self) -> list:
        return [str(self.csv_path(t)) for t in self.tickers if not self.csv_path(t).is_file()]

    def with_overrides(self, **changes) -> "ExperimentConfig":
        model_changes = {k: changes.pop(k) for k in list(changes) if k in ModelConfig.__dataclass_fields__}
        cfg = replace(self, **changes)
        if model_changes:
            cfg = replace(cfg, model=cfg.model.replace(**model_changes))
        return cfg

    def metadata(self) -> dict:
        return {
            "software_version": __version__,
            "target": self.target_ticker,
            "candidates": list(self.candidate_tickers),
            "date_range": [self.start, self.end],
            "calendar": self.calendar,
            "k": self.k,
            "lag_order": self.lag_order,
            "train_fraction": self.train_fraction,
            "threshold": self.threshold,
            "mode": self.mode,
            "risk_free_rate": self.risk_free_rate,
            "model": {k: v for k, v in self.model.to_dict().items()
                      if k not in ("architecture", "loss", "input_size")},
        }

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        path = Path(path)
        parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        if not parser.read(path):
            raise FileNotFoundError(path)
        return cls.from_parser(parser, base_dir=path.parent)

    @classmethod
    def from_parser(cls, cp: configparser.ConfigParser, base_dir=Path(".")) -> "ExperimentConfig":
        def get(section, key, default=None, conv=str):
            if not cp.has_option(section, key):
                return default
            raw = cp.get(section, key).strip()
            if raw == "":
                return default
            try:
                return conv(raw)
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}") from None

        def split_list(raw):
            return tuple(x.strip() for x in raw.replace("\n", ",").split(",") if x.strip())

        base_dir = Path(base_dir)
        data_dir = Path(get("data", "data_dir", "."))
        out_dir = Path(get("output", "dir", "runs"))
        target = get("data", "target")
        if target is None:
            raise ConfigError("[data] target is required")
        model = ModelConfig(
            architecture=get("model", "architecture", "lstm"),
            hidden_size=get("model", "hidden_size", 32, int),
            loss=get("model", "loss", "quantile"),
            quantiles=get("model", "quantiles", (0.1, 0.5, 0.9),
                          lambda s: tuple(float(x) for x in split_list(s))),
            learning_rate=get("model", "learning_rate", 1e-3, float),
            epochs=get("model", "epochs", 200, int),
            batch_size=get("model", "batch_size", 32, int),
            seed=get("model", "seed", 0, int),
            window_len=get("model", "window_len", 5, int),
            clip_norm=get("model", "clip_norm", None, float),
        )
        return cls(
            data_dir=data_dir if data_dir.is_absolute() else base_dir / data_dir,
            target_ticker=target,
            candidate_tickers=get("data", "candidates", (), split_list),
            output_dir=out_dir if out_dir.is_absolute() else base_dir / out_dir,
            start=get("data", "start"),
            end=get("data", "end"),
            calendar=get("data", "calendar", "intersection"),
            selection=get("selection", "method", "cointegration"),
            k=get("selection", "k", DEFAULT_K, int),
            lag_order=get("selection", "lag_order", 1, int),
            model=model,
            threshold=get("backtest", "threshold", 0.03, float),
            mode=get("backtest", "mode", "compounded"),
            risk_free_rate=get("backtest", "risk_free_rate", 0.0, float),
            train_fraction=get("split", "train_fraction", 0.8, float),
            cells=tuple(parse_cells(get("grid", "cells", "all"))),
            workers=get("grid", "workers", 1, int),
        )


class _Stage:
    """Context manager that re-raises any failure tagged with a stage name."""

    def __init__(self, name):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and not isinstance(exc, StageError):
            raise StageError(self.name, exc) from exc
        return False


def load_panel(config: ExperimentConfig) -> AlignedPanel:
    with _Stage("ingest"):
        missing = config.missing_files()
        if missing:
            raise FileNotFoundError(f"missing price file(s): {', '.join(missing)}")
        series = [load_csv(config.csv_path(t), ticker=t) for t in config.tickers]
        return align_and_interpolate(
            series, calendar=config.calendar, target=config.target_ticker,
            start=config.start, end=config.end,
        )


@dataclass(frozen=True)
class GridRow:
    label: str
    selection: str
    loss: str
    architecture: str
    cumulative_literal: float = math.nan
    cumulative_compounded: float = math.nan
    sharpe: float = math.nan
    baseline_literal: float = math.nan
    baseline_compounded: float = math.nan
    sharpe_baseline: float = math.nan
    n_days: int = 0
    features: tuple = ()
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.6f}"
    return str(v)


@dataclass(frozen=True)
class GridReport:
    rows: tuple
    metadata: dict

    def table(self) -> str:
        """Tab-separated results table, one line per cell, both cumulative modes."""
        lines = ["\t".join(["cell", "cumulative_return_literal", "cumulative_return_compounded",
                            "sharpe_ratio", "baseline_literal", "baseline_compounded",
                            "baseline_sharpe", "n_days", "status"])]
        for r in self.rows:
            lines.append("\t".join(_fmt(v) for v in (
                r.label, r.cumulative_literal, r.cumulative_compounded, r.sharpe,
                r.baseline_literal, r.baseline_compounded, r.sharpe_baseline, r.n_days, r.status)))
        return "\n".join(lines) + "\n"

    def body(self) -> str:
        """Deterministic JSON body (no timestamps)."""
        rows = []
        for r in self.rows:
            d = asdict(r)
            d["features"] = list(r.features)
            rows.append({k: (_fmt(v) if isinstance(v, float) else v) for k, v in d.items()})
        return json.dumps({"metadata": self.metadata, "rows": rows}, indent=2, sort_keys=True) + "\n"

    def write(self, directory) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "grid.tsv").write_text(self.table())
        (directory / "grid.json").write_text(self.body())


def cell_config(config: ExperimentConfig, cell: Cell) -> ExperimentConfig:
    model = config.model.replace(architecture=cell.architecture, loss=cell.loss)
    if cell.seed is not None:
        model = model.replace(seed=cell.seed)
    return replace(config, selection=cell.selection, model=model)


def run_experiment(config: ExperimentConfig, panel: AlignedPanel | None = None,
                   cell_dir: Path | None = None, label: str | None = None) -> GridRow:
    """Run one selection/loss/architecture combination end to end."""
    if panel is None:
        panel = load_panel(config)
    cell = Cell(config.selection, config.model.loss, config.model.architecture)
    label = label or cell.label
    out = Path(cell_dir) if cell_dir is not None else config.output_dir / label
    with _Stage("select"):
        report = select(panel, config.selection, config.k, config.lag_order)
    features = report.feature_columns()
    with _Stage("window"):
        dataset = make_windows(panel, features, config.model.window_len)
    with _Stage("split"):
        train_set, test_set = chrono_split(dataset, config.train_fraction)
    with _Stage("train"):
        model = train(config.model.replace(input_size=len(features)), train_set)
    with _Stage("predict"):
        forecast = predict(model, test_set)
    with _Stage("backtest"):
        result = run_backtest(forecast, threshold=config.threshold, mode=config.mode,
                              risk_free_rate=config.risk_free_rate)
    with _Stage("persist"):
        out.mkdir(parents=True, exist_ok=True)
        (out / "selection.json").write_text(report.to_json() + "\n")
        save_forecaster(model, out / "model.json")
        forecast.to_csv(out / "forecast.csv")
        (out / "backtest.json").write_text(result.to_json() + "\n")
        result.to_csv(out / "backtest_daily.csv")
    lit = result.cumulative("literal")
    comp = result.cumulative("compounded")
    row = GridRow(
        label=label,
        selection=cell.selection,
        loss=cell.loss,
        architecture=cell.architecture,
        cumulative_literal=lit[0],
        cumulative_compounded=comp[0],
        sharpe=result.sharpe_portfolio,
        baseline_literal=lit[1],
        baseline_compounded=comp[1],
        sharpe_baseline=result.sharpe_baseline,
        n_days=result.n_days,
        features=tuple(features),
    )
    with _Stage("persist"):
        (out / "row.json").write_text(json.dumps(
            {k: (_fmt(v) if isinstance(v, float) else v) for k, v in asdict(row).items()},
            indent=2, sort_keys=True) + "\n")
    return row


def _run_cell(args):
    config, panel, cell = args
    try:
        return run_experiment(cell_config(config, cell), panel, label=cell.label)
    except Exception as exc:  # a failed cell must not abort the grid
        return GridRow(cell.label, cell.selection, cell.loss, cell.architecture,
                       status=f"failed: {exc}".replace("\t", " ").replace("\n", " "))


def run_grid(config: ExperimentConfig, cells=None, workers: int | None = None) -> GridReport:
    cells = list(cells if cells is not None else (config.cells or grid_cells()))
    if not cells:
        raise ConfigError("no grid cells requested")
    panel = load_panel(config)
    workers = config.workers if workers is None else workers
    jobs = [(config, panel, cell) for cell in cells]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_cell, jobs))
    else:
        rows = [_run_cell(job) for job in jobs]
    meta = config.metadata()
    meta["n_days"] = panel.n_days
    meta["panel_dates"] = [panel.dates[0], panel.dates[-1]]
    meta["cells"] = [c.label for c in cells]
    report = GridReport(tuple(rows), meta)
    report.write(config.output_dir)
    return report
