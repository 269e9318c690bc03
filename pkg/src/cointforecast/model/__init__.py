"""Recurrent next-day forecasters trained under pinball or RMSE loss."""
from .config import ModelConfig
from .gradcheck import gradient_check
from .losses import DEFAULT_QUANTILES, quantile_loss, rmse_loss
from .network import ARCHITECTURES, Network
from .serialize import load_forecaster, save_forecaster
from .training import ForecastSeries, Normalizer, TrainedForecaster, forward, predict, train

__all__ = [
    "ARCHITECTURES",
    "DEFAULT_QUANTILES",
    "ForecastSeries",
    "ModelConfig",
    "Network",
    "Normalizer",
    "TrainedForecaster",
    "forward",
    "gradient_check",
    "load_forecaster",
    "predict",
    "quantile_loss",
    "rmse_loss",
    "save_forecaster",
    "train",
]
