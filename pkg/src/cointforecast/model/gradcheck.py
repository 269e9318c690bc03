from __future__ import annotations

import numpy as np

from .config import ModelConfig
from .training import loss_and_grad, network_for

KINK_MARGIN = 1e-4


def gradient_check(config: ModelConfig, weights, sample, n_coords: int = 200,
                   step: float = 1e-5, seed: int = 0, abs_floor: float = 1e-5) -> float:
    """Max relative error between BPTT gradients and central differences.

    ``sample`` is ``(window, target)`` in network units. If a quantile
    output sits within ``KINK_MARGIN`` of the target the target is nudged
    so the finite difference does not straddle the pinball kink.
    The default step sits near the cube root of machine epsilon, where
    truncation and roundoff error of the central difference balance.
    Relative error per coordinate is ``|a - n| / max(|a|, |n|, abs_floor)``;
    the floor keeps roundoff on near-zero coordinates (about 1e-10 absolute at
    double precision) from dominating.
    """
    net = network_for(config)
    w = np.array(weights, dtype=float)
    window, target = sample
    X = np.asarray(window, dtype=float)[None]
    y = np.array([float(target)])

    out, cache = net.forward(w, X)
    if config.loss == "quantile":
        gap = np.min(np.abs(out[0] - y[0]))
        if gap < KINK_MARGIN:
            y = y + 10 * KINK_MARGIN
            out, cache = net.forward(w, X)
    _, d_out = loss_and_grad(config, out, y)
    analytic = net.backward(w, cache, d_out)

    rng = np.random.default_rng(seed)
    n = net.n_params
    coords = np.arange(n) if n <= n_coords else np.sort(rng.choice(n, n_coords, replace=False))

    def loss_at(vec):
        o, _ = net.forward(vec, X, keep_cache=False)
        return loss_and_grad(config, o, y)[0]

    worst = 0.0
    for i in coords:
        orig = w[i]
        w[i] = orig + step
        plus = loss_at(w)
        w[i] = orig - step
        minus = loss_at(w)
        w[i] = orig
        numeric = (plus - minus) / (2 * step)
        denom = max(abs(analytic[i]), abs(numeric), abs_floor)
        worst = max(worst, abs(analytic[i] - numeric) / denom)
    return worst
