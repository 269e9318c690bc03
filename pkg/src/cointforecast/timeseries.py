"""Price ingestion, calendar alignment, returns, and windowing.

Dates are carried as ISO ``YYYY-MM-DD`` strings throughout; a missing close
price is represented by ``nan`` until :func:`align_and_interpolate` removes
every gap.
"""
from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    AlignmentError,
    DataFormatError,
    DegenerateSeriesError,
    DomainError,
    EmptyDataError,
    InsufficientDataError,
    SplitError,
)

GAP_TOKENS = frozenset({"", "null", "nan", "none", "na", "n/a"})

__all__ = [
    "PriceSeries",
    "AlignedPanel",
    "WindowedDataset",
    "load_csv",
    "write_csv",
    "align_and_interpolate",
    "log_returns",
    "make_windows",
    "chrono_split",
]


def _frozen(arr, dtype=float):
    arr = np.array(arr, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _parse_date(text: str) -> str:
    text = text.strip()
    # accept full timestamps, keep the calendar day
    try:
        return dt.date.fromisoformat(text[:10]).isoformat()
    except ValueError:
        raise DataFormatError(f"unparseable date {text!r}") from None


@dataclass(frozen=True)
class PriceSeries:
    """Close prices of one ticker, ``nan`` marking a gap."""

    ticker: str
    dates: tuple
    close: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "close", _frozen(self.close))
        if len(self.dates) != len(self.close):
            raise DataFormatError(
                f"{self.ticker}: {len(self.dates)} dates but {len(self.close)} prices"
            )
        if any(a >= b for a, b in zip(self.dates, self.dates[1:])):
            raise DataFormatError(f"{self.ticker}: dates must be strictly increasing")
        if np.isinf(self.close).any():
            raise DataFormatError(f"{self.ticker}: infinite close price")

    def __len__(self):
        return len(self.dates)

    @property
    def gaps(self) -> np.ndarray:
        return np.isnan(self.close)


@dataclass(frozen=True)
class AlignedPanel:
    """Gap-free ``T x N`` matrix of close prices on a shared calendar."""

    dates: tuple
    tickers: tuple
    values: np.ndarray
    target_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "values", _frozen(self.values))
        if self.values.ndim != 2 or self.values.shape != (len(self.dates), len(self.tickers)):
            raise DataFormatError(
                f"values shape {self.values.shape} does not match "
                f"{len(self.dates)} dates x {len(self.tickers)} tickers"
            )
        if not np.isfinite(self.values).all():
            raise DataFormatError("panel contains missing or non-finite values")
        if not 0 <= self.target_index < len(self.tickers):
            raise DataFormatError(f"target_index {self.target_index} out of range")
        if len(set(self.tickers)) != len(self.tickers):
            raise DataFormatError("duplicate tickers in panel")

    @property
    def n_days(self) -> int:
        return len(self.dates)

    @property
    def target(self) -> str:
        return self.tickers[self.target_index]

    @property
    def candidates(self) -> list:
        """Every ticker except the target, in column order."""
        return [t for i, t in enumerate(self.tickers) if i != self.target_index]

    def column_index(self, column) -> int:
        if isinstance(column, str):
            try:
                return self.tickers.index(column)
            except ValueError:
                raise KeyError(f"unknown ticker {column!r}") from None
        column = int(column)
        if not 0 <= column < len(self.tickers):
            raise IndexError(f"column {column} out of range")
        return column

    def column(self, column) -> np.ndarray:
        return self.values[:, self.column_index(column)]

    def with_target(self, ticker: str) -> "AlignedPanel":
        return AlignedPanel(self.dates, self.tickers, self.values, self.column_index(ticker))

    def subset(self, tickers: Sequence[str]) -> "AlignedPanel":
        """Panel restricted to ``tickers``; the target is kept if listed."""
        idx = [self.column_index(t) for t in tickers]
        target = self.target
        new_target = list(tickers).index(target) if target in tickers else 0
        return AlignedPanel(self.dates, tickers, self.values[:, idx], new_target)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["Date", *self.tickers])
            for d, row in zip(self.dates, self.values):
                writer.writerow([d, *(repr(float(v)) for v in row)])


@dataclass(frozen=True)
class WindowedDataset:
    """Supervised samples: ``inputs[i]`` holds the ``window_len`` days before
    ``sample_dates[i]`` and ``targets[i]`` is the target price on that date.

    ``previous_target[i]`` is the target price on the last day inside the
    window, i.e. the most recent observed price when the forecast is made.
    """

    inputs: np.ndarray
    targets: np.ndarray
    sample_dates: tuple
    previous_target: np.ndarray
    feature_names: tuple = ()
    target_name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "inputs", _frozen(self.inputs))
        object.__setattr__(self, "targets", _frozen(self.targets))
        object.__setattr__(self, "previous_target", _frozen(self.previous_target))
        object.__setattr__(self, "sample_dates", tuple(self.sample_dates))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        n = len(self.targets)
        if self.inputs.ndim != 3 or self.inputs.shape[0] != n:
            raise DataFormatError(f"inputs shape {self.inputs.shape} inconsistent with {n} targets")
        if len(self.sample_dates) != n or len(self.previous_target) != n:
            raise DataFormatError("sample_dates/previous_target length mismatch")

    def __len__(self):
        return len(self.targets)

    @property
    def window_len(self) -> int:
        return self.inputs.shape[1]

    @property
    def n_features(self) -> int:
        return self.inputs.shape[2]

    def slice(self, start, stop) -> "WindowedDataset":
        sl = slice(start, stop)
        return WindowedDataset(
            self.inputs[sl],
            self.targets[sl],
            self.sample_dates[sl],
            self.previous_target[sl],
            self.feature_names,
            self.target_name,
        )


def load_csv(path, ticker: str | None = None) -> PriceSeries:
    """Read ``Date`` and ``Close`` columns from a CSV file.

    Rows may appear in any order. ``null``, ``NaN`` and empty Close cells (and
    anything else that does not parse as a finite number) become gaps.
    """
    path = Path(path)
    if ticker is None:
        ticker = path.stem
    with open(path, newline="") as fh:  # FileNotFoundError propagates
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDataError(f"{path}: empty file") from None
        lookup = {name.strip().lower(): i for i, name in enumerate(header)}
        for col in ("date", "close"):
            if col not in lookup:
                raise DataFormatError(f"{path}: missing {col.capitalize()!r} column")
        i_date, i_close = lookup["date"], lookup["close"]
        rows = {}
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) <= max(i_date, i_close):
                raise DataFormatError(f"{path}:{lineno}: short row")
            date = _parse_date(row[i_date])
            if date in rows:
                raise DataFormatError(f"{path}:{lineno}: duplicate date {date}")
            rows[date] = _parse_close(row[i_close])
    if not rows:
        raise EmptyDataError(f"{path}: no data rows")
    dates = sorted(rows)
    return PriceSeries(ticker, dates, [rows[d] for d in dates])


def _parse_close(cell: str) -> float:
    cell = cell.strip()
    if cell.lower() in GAP_TOKENS:
        return math.nan
    try:
        value = float(cell)
    except ValueError:
        return math.nan
    return value if math.isfinite(value) else math.nan


def write_csv(series: PriceSeries, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["Date", "Close"])
        for d, c in zip(series.dates, series.close):
            writer.writerow([d, "null" if math.isnan(c) else repr(float(c))])


def _fill_gaps(values: np.ndarray) -> np.ndarray:
    """Linear interpolation over positions, nearest carry at the ends."""
    observed = ~np.isnan(values)
    pos = np.arange(len(values))
    # np.interp clamps outside the observed range, which is exactly the carry rule
    return np.interp(pos, pos[observed], values[observed])


def align_and_interpolate(
    series: Sequence[PriceSeries],
    calendar: str = "intersection",
    target: str | None = None,
    start: str | None = None,
    end: str | None = None,
) -> AlignedPanel:
    """Put several price series on one calendar and fill every gap.

    ``calendar`` is ``"intersection"`` (dates every series reports) or
    ``"union"``. ``start``/``end`` optionally clip the calendar (inclusive).
    The target defaults to the first series.
    """
    if len(series) < 2:
        raise AlignmentError("need at least two series to align")
    if calendar not in ("intersection", "union"):
        raise ValueError(f"unknown calendar policy {calendar!r}")
    date_sets = [set(s.dates) for s in series]
    if calendar == "intersection":
        dates = set.intersection(*date_sets)
    else:
        dates = set.union(*date_sets)
    if start is not None:
        dates = {d for d in dates if d >= _parse_date(start)}
    if end is not None:
        dates = {d for d in dates if d <= _parse_date(end)}
    lo = max(min(s.dates) for s in series)
    hi = min(max(s.dates) for s in series)
    if not dates or lo > hi:
        raise AlignmentError("series have no overlapping dates")
    dates = sorted(dates)

    columns = []
    for s in series:
        lookup = dict(zip(s.dates, s.close))
        col = np.array([lookup.get(d, math.nan) for d in dates], dtype=float)
        if np.isnan(col).all():
            raise DegenerateSeriesError(f"{s.ticker}: no observations on the aligned calendar")
        columns.append(_fill_gaps(col))

    tickers = [s.ticker for s in series]
    target_index = 0 if target is None else tickers.index(target)
    return AlignedPanel(dates, tickers, np.column_stack(columns), target_index)


def log_returns(panel: AlignedPanel, column=None) -> np.ndarray:
    """Consecutive-day log returns ``ln(P[n+1] / P[n])`` of one column."""
    prices = panel.column(panel.target_index if column is None else column)
    return price_log_returns(prices)


def price_log_returns(prices) -> np.ndarray:
    prices = np.asarray(prices, dtype=float)
    if (prices <= 0).any():
        raise DomainError("log returns need strictly positive prices")
    return np.diff(np.log(prices))


def make_windows(panel: AlignedPanel, feature_columns, window_len: int = 5) -> WindowedDataset:
    """Slice the panel into ``(window_len x p)`` inputs with next-day targets."""
    if window_len < 1:
        raise ValueError("window_len must be >= 1")
    cols = [panel.column_index(c) for c in feature_columns]
    if not cols:
        raise ValueError("feature_columns must be nonempty")
    T = panel.n_days
    if window_len >= T:
        raise InsufficientDataError(f"window_len {window_len} needs more than {T} days")
    features = panel.values[:, cols]
    target = panel.values[:, panel.target_index]
    n = T - window_len
    inputs = np.lib.stride_tricks.sliding_window_view(features, window_len, axis=0)[:n]
    inputs = np.ascontiguousarray(np.swapaxes(inputs, 1, 2))
    return WindowedDataset(
        inputs=inputs,
        targets=target[window_len:],
        sample_dates=panel.dates[window_len:],
        previous_target=target[window_len - 1 : T - 1],
        feature_names=[panel.tickers[c] for c in cols],
        target_name=panel.target,
    )


def chrono_split(dataset: WindowedDataset, train_fraction: float = 0.8):
    """Split into (train, test) with every train date before every test date."""
    if not 0.0 < train_fraction < 1.0:
        raise SplitError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    n = len(dataset)
    # guard against 0.29 * 100 == 28.999999999999996
    n_train = math.floor(train_fraction * n + 1e-9)
    if n_train == 0 or n_train == n:
        raise SplitError(f"split of {n} samples at {train_fraction} leaves one side empty")
    return dataset.slice(0, n_train), dataset.slice(n_train, n)
