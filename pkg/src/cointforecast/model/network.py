"""Recurrent trunk (vanilla RNN, LSTM or GRU) plus a linear head, in numpy.

All parameters live in one flat float64 vector; :class:`Network` knows the
named segments and hands out reshaped views. Forward passes are batched over
samples (``X`` has shape ``(B, L, p)``) and always start from a zero state.

Gate layouts along the stacked row axis of ``W_x``, ``W_h`` and ``b``:

* LSTM: input, forget, candidate, output
* GRU: update, reset, candidate; the reset gate multiplies the previous
  state *before* the recurrent product, ``n = tanh(W_xn x + W_hn (r * h) + b_n)``,
  and ``h' = (1 - z) * n + z * h``.
"""
from __future__ import annotations

import numpy as np

from ..errors import ShapeError

ARCHITECTURES = ("rnn", "lstm", "gru")
_GATES = {"rnn": 1, "lstm": 4, "gru": 3}


def sigmoid(x):
    # split by sign so exp never overflows
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


class Network:
    def __init__(self, architecture: str, input_size: int, hidden_size: int, output_size: int):
        if architecture not in ARCHITECTURES:
            raise ValueError(f"architecture must be one of {ARCHITECTURES}")
        self.architecture = architecture
        self.input_size = input_size
        self.hidden_size = hidden_size
        self.output_size = output_size
        G, H, p, Q = _GATES[architecture], hidden_size, input_size, output_size
        self.segments = [
            ("W_x", (G * H, p)),
            ("W_h", (G * H, H)),
            ("b", (G * H,)),
            ("W_out", (Q, H)),
            ("b_out", (Q,)),
        ]
        self.offsets = {}
        pos = 0
        for name, shape in self.segments:
            size = int(np.prod(shape))
            self.offsets[name] = (pos, pos + size, shape)
            pos += size
        self.n_params = pos

    def unpack(self, flat: np.ndarray) -> dict:
        if flat.shape != (self.n_params,):
            raise ShapeError(f"expected {self.n_params} parameters, got shape {flat.shape}")
        return {name: flat[a:b].reshape(shape) for name, (a, b, shape) in self.offsets.items()}

    def init_weights(self, rng: np.random.Generator) -> np.ndarray:
        bound = 1.0 / np.sqrt(self.hidden_size)
        return rng.uniform(-bound, bound, self.n_params)

    def _check_input(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 2:
            X = X[None]
        if X.ndim != 3 or X.shape[2] != self.input_size:
            raise ShapeError(f"input must be (B, L, {self.input_size}), got {X.shape}")
        return X

    # -- forward ---------------------------------------------------------

    def forward(self, flat, X, keep_cache=True):
        """Return ``(outputs (B, Q), cache)``; cache is ``None`` when not kept."""
        X = self._check_input(X)
        P = self.unpack(flat)
        step = getattr(self, f"_step_{self.architecture}")
        B, L, _ = X.shape
        H = self.hidden_size
        h = np.zeros((B, H))
        c = np.zeros((B, H))
        caches = []
        states = [h]
        for t in range(L):
            h, c, cache = step(P, X[:, t, :], h, c)
            states.append(h)
            if keep_cache:
                caches.append(cache)
        out = h @ P["W_out"].T + P["b_out"]
        if not keep_cache:
            return out, None
        return out, {"X": X, "steps": caches, "h": states, "c_final": c}

    def _step_rnn(self, P, x, h, c):
        h_new = np.tanh(x @ P["W_x"].T + h @ P["W_h"].T + P["b"])
        return h_new, c, (h, h_new)

    def _step_lstm(self, P, x, h, c):
        H = self.hidden_size
        a = x @ P["W_x"].T + h @ P["W_h"].T + P["b"]
        i = sigmoid(a[:, :H])
        f = sigmoid(a[:, H : 2 * H])
        g = np.tanh(a[:, 2 * H : 3 * H])
        o = sigmoid(a[:, 3 * H :])
        c_new = f * c + i * g
        tc = np.tanh(c_new)
        h_new = o * tc
        return h_new, c_new, (h, c, i, f, g, o, tc)

    def _step_gru(self, P, x, h, c):
        H = self.hidden_size
        ax = x @ P["W_x"].T + P["b"]
        W_h = P["W_h"]
        ah = h @ W_h[: 2 * H].T
        z = sigmoid(ax[:, :H] + ah[:, :H])
        r = sigmoid(ax[:, H : 2 * H] + ah[:, H:])
        rh = r * h
        n = np.tanh(ax[:, 2 * H :] + rh @ W_h[2 * H :].T)
        h_new = (1.0 - z) * n + z * h
        return h_new, c, (h, z, r, n, rh)

    # -- backward --------------------------------------------------------

    def backward(self, flat, cache, d_out) -> np.ndarray:
        """Gradient of the loss w.r.t. the flat parameters given ``dL/d outputs``."""
        P = self.unpack(flat)
        grad = np.zeros(self.n_params)
        G = self.unpack(grad)
        X = cache["X"]
        h_last = cache["h"][-1]
        G["W_out"][...] = d_out.T @ h_last
        G["b_out"][...] = d_out.sum(axis=0)
        dh = d_out @ P["W_out"]
        back = getattr(self, f"_back_{self.architecture}")
        dc = np.zeros_like(dh)
        for t in range(X.shape[1] - 1, -1, -1):
            dh, dc = back(P, G, X[:, t, :], cache["steps"][t], dh, dc)
        return grad

    def _back_rnn(self, P, G, x, step, dh, dc):
        h_prev, h = step
        da = dh * (1.0 - h * h)
        G["W_x"] += da.T @ x
        G["W_h"] += da.T @ h_prev
        G["b"] += da.sum(axis=0)
        return da @ P["W_h"], dc

    def _back_lstm(self, P, G, x, step, dh, dc):
        h_prev, c_prev, i, f, g, o, tc = step
        do = dh * tc
        dc = dc + dh * o * (1.0 - tc * tc)
        da = np.concatenate(
            [
                dc * g * i * (1.0 - i),
                dc * c_prev * f * (1.0 - f),
                dc * i * (1.0 - g * g),
                do * o * (1.0 - o),
            ],
            axis=1,
        )
        G["W_x"] += da.T @ x
        G["W_h"] += da.T @ h_prev
        G["b"] += da.sum(axis=0)
        return da @ P["W_h"], dc * f

    def _back_gru(self, P, G, x, step, dh, dc):
        H = self.hidden_size
        h_prev, z, r, n, rh = step
        W_h = P["W_h"]
        dn = dh * (1.0 - z)
        dz = dh * (h_prev - n)
        dh_prev = dh * z
        dan = dn * (1.0 - n * n)
        drh = dan @ W_h[2 * H :]
        dr = drh * h_prev
        dh_prev += drh * r
        daz = dz * z * (1.0 - z)
        dar = dr * r * (1.0 - r)
        dzr = np.concatenate([daz, dar], axis=1)
        da = np.concatenate([dzr, dan], axis=1)
        G["W_x"] += da.T @ x
        G["b"] += da.sum(axis=0)
        G["W_h"][: 2 * H] += dzr.T @ h_prev
        G["W_h"][2 * H :] += dan.T @ rh
        dh_prev += dzr @ W_h[: 2 * H]
        return dh_prev, dc
