"""Training (Adam + full BPTT) and prediction for the recurrent forecaster."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ShapeError, TrainingError
from ..timeseries import WindowedDataset
from .config import ModelConfig
from .losses import quantile_loss_grad, rmse_loss_grad
from .network import Network

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass(frozen=True)
class Normalizer:
    """Min-max scaling to [0, 1], fitted on training data only."""

    feature_min: np.ndarray
    feature_max: np.ndarray
    target_min: float
    target_max: float

    @classmethod
    def fit(cls, dataset: WindowedDataset) -> "Normalizer":
        flat = dataset.inputs.reshape(-1, dataset.n_features)
        lo, hi = flat.min(axis=0), flat.max(axis=0)
        # a flat feature gets unit span so it maps to 0 instead of dividing by zero
        hi = np.where(hi > lo, hi, lo + 1.0)
        tlo, thi = float(dataset.targets.min()), float(dataset.targets.max())
        if not thi > tlo:
            thi = tlo + 1.0
        return cls(lo, hi, tlo, thi)

    def transform_inputs(self, inputs):
        return (np.asarray(inputs, dtype=float) - self.feature_min) / (self.feature_max - self.feature_min)

    def inverse_inputs(self, scaled):
        return np.asarray(scaled) * (self.feature_max - self.feature_min) + self.feature_min

    def transform_target(self, y):
        return (np.asarray(y, dtype=float) - self.target_min) / (self.target_max - self.target_min)

    def inverse_target(self, scaled):
        return np.asarray(scaled) * (self.target_max - self.target_min) + self.target_min


@dataclass(frozen=True)
class TrainedForecaster:
    config: ModelConfig
    weights: np.ndarray
    normalizer: Normalizer
    training_loss_history: tuple = ()
    feature_names: tuple = ()

    @property
    def network(self) -> Network:
        return network_for(self.config)

    def predict(self, dataset: WindowedDataset) -> "ForecastSeries":
        return predict(self, dataset)


@dataclass(frozen=True)
class ForecastSeries:
    """Next-day forecasts in price units.

    ``previous_actual[i]`` is the last price observed before ``dates[i]``;
    ``point_estimate`` is the median-quantile (or single RMSE) output.
    """

    dates: tuple
    predicted: np.ndarray
    actual: np.ndarray
    point_estimate: np.ndarray
    previous_actual: np.ndarray
    quantiles: tuple = ()

    def __post_init__(self):
        n = len(self.dates)
        for name in ("predicted", "actual", "point_estimate", "previous_actual"):
            if len(getattr(self, name)) != n:
                raise ShapeError(f"{name} length differs from dates")

    def __len__(self):
        return len(self.dates)

    def to_csv(self, path) -> None:
        cols = [f"q{q:g}" for q in self.quantiles] if self.quantiles else ["predicted"]
        with open(path, "w") as fh:
            fh.write(",".join(["date", "previous_actual", "actual", "point_estimate", *cols]) + "\n")
            for i, d in enumerate(self.dates):
                vals = [self.previous_actual[i], self.actual[i], self.point_estimate[i], *self.predicted[i]]
                fh.write(",".join([d, *(repr(float(v)) for v in vals)]) + "\n")


def network_for(config: ModelConfig) -> Network:
    return Network(config.architecture, config.input_size, config.hidden_size, config.output_size)


def loss_and_grad(config: ModelConfig, outputs, targets):
    if config.loss == "quantile":
        return quantile_loss_grad(outputs, targets, config.quantiles)
    return rmse_loss_grad(outputs, targets)


def forward(config: ModelConfig, weights, window) -> np.ndarray:
    """Prediction vector for one ``(L x p)`` window already in network units."""
    window = np.asarray(window, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if not np.isfinite(weights).all():
        raise ValueError("weights contain non-finite values")
    if window.ndim != 2:
        raise ShapeError(f"window must be 2-d, got shape {window.shape}")
    out, _ = network_for(config).forward(weights, window[None], keep_cache=False)
    return out[0]


def train(config: ModelConfig, train_set: WindowedDataset) -> TrainedForecaster:
    """Fit a forecaster on chronologically ordered windows.

    Deterministic for fixed ``(config, train_set)``: the only randomness is
    the seeded weight initialisation, and batches are never shuffled.
    """
    if len(train_set) == 0:
        raise ValueError("training set is empty")
    if train_set.n_features != config.input_size:
        raise ShapeError(
            f"config.input_size={config.input_size} but data has {train_set.n_features} features"
        )
    normalizer = Normalizer.fit(train_set)
    X = normalizer.transform_inputs(train_set.inputs)
    y = normalizer.transform_target(train_set.targets)

    net = network_for(config)
    rng = np.random.default_rng(config.seed)
    w = net.init_weights(rng)
    m = np.zeros_like(w)
    v = np.zeros_like(w)
    step = 0
    n = len(y)
    history = []
    for epoch in range(1, config.epochs + 1):
        total = 0.0
        for start in range(0, n, config.batch_size):
            xb = X[start : start + config.batch_size]
            yb = y[start : start + config.batch_size]
            out, cache = net.forward(w, xb)
            loss, d_out = loss_and_grad(config, out, yb)
            if not math.isfinite(loss):
                raise TrainingError(f"non-finite training loss at epoch {epoch}", epoch=epoch)
            g = net.backward(w, cache, d_out)
            if config.clip_norm is not None:
                norm = np.sqrt(g @ g)
                if norm > config.clip_norm:
                    g *= config.clip_norm / norm
            step += 1
            m = ADAM_BETA1 * m + (1.0 - ADAM_BETA1) * g
            v = ADAM_BETA2 * v + (1.0 - ADAM_BETA2) * g * g
            m_hat = m / (1.0 - ADAM_BETA1**step)
            v_hat = v / (1.0 - ADAM_BETA2**step)
            w = w - config.learning_rate * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
            total += loss * len(yb)
        epoch_loss = total / n
        if not (math.isfinite(epoch_loss) and np.isfinite(w).all()):
            raise TrainingError(f"training diverged at epoch {epoch}", epoch=epoch)
        history.append(epoch_loss)
    return TrainedForecaster(config, w, normalizer, tuple(history), train_set.feature_names)


def predict(model: TrainedForecaster, dataset: WindowedDataset) -> ForecastSeries:
    cfg = model.config
    if dataset.n_features != cfg.input_size:
        raise ShapeError(f"model expects {cfg.input_size} features, data has {dataset.n_features}")
    X = model.normalizer.transform_inputs(dataset.inputs)
    out, _ = model.network.forward(model.weights, X, keep_cache=False)
    prices = model.normalizer.inverse_target(out)
    return ForecastSeries(
        dates=dataset.sample_dates,
        predicted=prices,
        actual=np.array(dataset.targets),
        point_estimate=prices[:, cfg.median_index].copy(),
        previous_actual=np.array(dataset.previous_target),
        quantiles=cfg.quantiles if cfg.loss == "quantile" else (),
    )
