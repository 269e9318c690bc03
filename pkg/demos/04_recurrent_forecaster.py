"""
Training a recurrent forecaster
===============================

A GRU reads five days of (companion, target) prices and emits the 10%,
50% and 90% quantiles of tomorrow's target price. Gradients come from
hand-written backpropagation through time, so we first confirm them
against finite differences.
"""
# %%
import numpy as np

from cointforecast.datasets import synthetic_market
from cointforecast.model import ModelConfig, gradient_check, predict, train
from cointforecast.model.training import network_for
from cointforecast.timeseries import align_and_interpolate, chrono_split, make_windows

cfg = ModelConfig(architecture="gru", loss="quantile", input_size=3, hidden_size=16, epochs=60)
rng = np.random.default_rng(0)
weights = network_for(cfg).init_weights(rng)
sample = (rng.uniform(size=(5, 3)), 0.4)
print("max relative gradient error:", f"{gradient_check(cfg, weights, sample):.2e}")

# %%
panel = align_and_interpolate(synthetic_market(n_days=400, seed=1))
data = make_windows(panel, ["LINK1", "LINK2", panel.target], window_len=5)
train_set, test_set = chrono_split(data, 0.8)
model = train(cfg, train_set)
hist = model.training_loss_history
print(f"pinball loss: epoch 1 {hist[0]:.4f} -> epoch {len(hist)} {hist[-1]:.4f}")

# %%
fc = predict(model, test_set)
print("date        actual    q0.1     q0.5     q0.9")
for i in range(5):
    q = fc.predicted[i]
    print(f"{fc.dates[i]}  {fc.actual[i]:7.2f}  {q[0]:7.2f}  {q[1]:7.2f}  {q[2]:7.2f}")
inside = np.mean((fc.actual >= fc.predicted[:, 0]) & (fc.actual <= fc.predicted[:, 2]))
print(f"share of test days inside the 10-90 band: {inside:.0%}")
