"""Plain-text (JSON) persistence for trained forecasters.

Floats go through ``repr`` which round-trips IEEE doubles exactly, so a
save/load cycle reproduces the weights bit for bit.
"""
from __future__ import annotations

import json

import numpy as np

from .config import ModelConfig
from .training import Normalizer, TrainedForecaster

FORMAT = "cointforecast.forecaster"
VERSION = 1


def _floats(arr):
    return [float(v) for v in np.asarray(arr).ravel()]


def to_dict(model: TrainedForecaster) -> dict:
    net = model.network
    return {
        "format": FORMAT,
        "version": VERSION,
        "header": {
            "architecture": model.config.architecture,
            "input_size": model.config.input_size,
            "hidden_size": model.config.hidden_size,
            "output_size": model.config.output_size,
            "quantiles": list(model.config.quantiles) if model.config.loss == "quantile" else [],
            "seed": model.config.seed,
            "segments": [[name, list(shape)] for name, shape in net.segments],
        },
        "config": model.config.to_dict(),
        "feature_names": list(model.feature_names),
        "weights": _floats(model.weights),
        "normalizer": {
            "feature_min": _floats(model.normalizer.feature_min),
            "feature_max": _floats(model.normalizer.feature_max),
            "target_min": float(model.normalizer.target_min),
            "target_max": float(model.normalizer.target_max),
        },
        "training_loss_history": [float(v) for v in model.training_loss_history],
    }


def from_dict(d: dict) -> TrainedForecaster:
    if d.get("format") != FORMAT:
        raise ValueError("not a serialized forecaster")
    if d.get("version") != VERSION:
        raise ValueError(f"unsupported forecaster file version {d.get('version')}")
    config = ModelConfig.from_dict(d["config"])
    weights = np.array(d["weights"], dtype=float)
    n = d["normalizer"]
    model = TrainedForecaster(
        config=config,
        weights=weights,
        normalizer=Normalizer(
            np.array(n["feature_min"], dtype=float),
            np.array(n["feature_max"], dtype=float),
            float(n["target_min"]),
            float(n["target_max"]),
        ),
        training_loss_history=tuple(d["training_loss_history"]),
        feature_names=tuple(d.get("feature_names", ())),
    )
    if model.network.n_params != len(weights):
        raise ValueError("weight vector length does not match the architecture")
    return model


def save_forecaster(model: TrainedForecaster, path) -> None:
    with open(path, "w") as fh:
        json.dump(to_dict(model), fh, indent=1)
        fh.write("\n")


def load_forecaster(path) -> TrainedForecaster:
    with open(path) as fh:
        return from_dict(json.load(fh))
