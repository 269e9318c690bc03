from __future__ import annotations

from dataclasses import asdict, dataclass, replace

from ..errors import ConfigError
from .losses import DEFAULT_QUANTILES
from .network import ARCHITECTURES

LOSSES = ("quantile", "rmse")


@dataclass(frozen=True)
class ModelConfig:
    """Architecture, loss and optimizer settings for one forecaster.

    The optimizer is Adam over chronological mini-batches; nothing here is
    tuned per dataset.
    """

    architecture: str = "lstm"
    hidden_size: int = 32
    input_size: int = 1
    loss: str = "quantile"
    quantiles: tuple = DEFAULT_QUANTILES
    learning_rate: float = 1e-3
    epochs: int = 200
    batch_size: int = 32
    seed: int = 0
    window_len: int = 5
    clip_norm: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "quantiles", tuple(float(q) for q in self.quantiles))
        if self.architecture not in ARCHITECTURES:
            raise ConfigError(f"architecture must be one of {ARCHITECTURES}")
        if self.loss not in LOSSES:
            raise ConfigError(f"loss must be one of {LOSSES}")
        for name in ("hidden_size", "input_size", "epochs", "batch_size", "window_len"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if not self.learning_rate > 0:
            raise ConfigError("learning_rate must be positive")
        q = self.quantiles
        if self.loss == "quantile":
            if not q or any(not 0.0 < v < 1.0 for v in q):
                raise ConfigError("quantiles must lie strictly inside (0, 1)")
            if any(a >= b for a, b in zip(q, q[1:])):
                raise ConfigError("quantiles must be sorted ascending without repeats")
        if self.clip_norm is not None and not self.clip_norm > 0:
            raise ConfigError("clip_norm must be positive")

    @property
    def output_size(self) -> int:
        return len(self.quantiles) if self.loss == "quantile" else 1

    @property
    def median_index(self) -> int:
        """Output column used as the point forecast."""
        if self.loss != "quantile":
            return 0
        return min(range(len(self.quantiles)), key=lambda i: abs(self.quantiles[i] - 0.5))

    def replace(self, **changes) -> "ModelConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["quantiles"] = list(self.quantiles)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        return cls(**d)
