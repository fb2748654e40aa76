"""LSTM cell and sequence runners built on the tensor ops.

Weight layout per cell: W (input_dim x 4H), U (H x 4H), b (4H,), with the
gate columns ordered [input, forget, candidate, output]. The forget-gate
bias block is initialized to +1 so early training does not forget state.
"""

from __future__ import annotations

import numpy as np

from . import tensor as T


class LSTMWeights:
    """One cell's parameters, registered under a name prefix."""

    def __init__(self, prefix, input_dim, hidden, rng, init_scale=0.08):
        self.hidden = hidden
        self.W = T.Tensor(rng.uniform(-init_scale, init_scale, (input_dim, 4 * hidden)),
                          requires_grad=True, name=f"{prefix}.W")
        self.U = T.Tensor(rng.uniform(-init_scale, init_scale, (hidden, 4 * hidden)),
                          requires_grad=True, name=f"{prefix}.U")
        b = np.zeros(4 * hidden)
        b[hidden:2 * hidden] = 1.0  # forget gate
        self.b = T.Tensor(b, requires_grad=True, name=f"{prefix}.b")

    def named(self):
        return {t.name: t for t in (self.W, self.U, self.b)}


def lstm_step(x_proj, h_prev, c_prev, weights):
    """One step given the already-projected input row ``x_proj = x @ W + b``."""
    H = weights.hidden
    gates = x_proj + T.matmul(h_prev, weights.U)
    i = T.sigmoid(T.slice_cols(gates, 0, H))
    f = T.sigmoid(T.slice_cols(gates, H, 2 * H))
    g = T.tanh(T.slice_cols(gates, 2 * H, 3 * H))
    o = T.sigmoid(T.slice_cols(gates, 3 * H, 4 * H))
    c = f * c_prev + i * g
    h = o * T.tanh(c)
    return h, c


def lstm_cell(x, h_prev, c_prev, weights):
    """One step from a raw input row (1 x input_dim)."""
    return lstm_step(T.matmul(x, weights.W) + weights.b, h_prev, c_prev, weights)


def run_direction(xs, weights, reverse=False):
    """Run a sequence (L x input_dim) through one direction, h/c starting at 0.

    Returns the stacked hidden states in original time order (L x H).
    The input projection is batched once; only the recurrent matmul runs
    per step.
    """
    L = xs.shape[0]
    H = weights.hidden
    x_proj = T.matmul(xs, weights.W) + weights.b
    order = range(L - 1, -1, -1) if reverse else range(L)
    h = T.Tensor(np.zeros((1, H)))
    c = T.Tensor(np.zeros((1, H)))
    outs = [None] * L
    for t in order:
        h, c = lstm_step(T.take_rows(x_proj, [t]), h, c, weights)
        outs[t] = h
    return T.concat(outs, axis=0)


def run_bilstm_layer(xs, fwd, bwd):
    """Bidirectional layer: concat of forward and backward states (L x 2H)."""
    return T.concat([run_direction(xs, fwd), run_direction(xs, bwd, reverse=True)], axis=1)
