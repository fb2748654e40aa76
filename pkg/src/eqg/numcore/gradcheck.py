"""Finite-difference verification of reverse-mode gradients."""

from __future__ import annotations

import numpy as np


def finite_diff_check(f, params, step=1e-5, rel_floor=1e-6):
    """Compare backward() gradients of ``f`` against central differences.

    ``f`` takes no arguments, evaluates the loss from the current parameter
    values and returns a scalar Tensor. It must be deterministic (dropout
    off). ``params`` is a name -> Tensor mapping.

    Returns the maximum relative error over all coordinates, where the
    relative error uses max(|analytic|, |numeric|, rel_floor) as the
    denominator so near-zero gradients compare on an absolute scale.
    """
    for p in params.values():
        p.grad = None
    loss = f()
    loss.backward()
    analytic = {name: (np.zeros_like(p.data) if p.grad is None else p.grad.copy())
                for name, p in params.items()}
    for p in params.values():
        p.grad = None

    worst = 0.0
    for name, p in params.items():
        flat = p.data.reshape(-1)
        a_flat = analytic[name].reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            f_plus = f().item()
            flat[i] = orig - step
            f_minus = f().item()
            flat[i] = orig
            numeric = (f_plus - f_minus) / (2.0 * step)
            denom = max(abs(a_flat[i]), abs(numeric), rel_floor)
            worst = max(worst, abs(a_flat[i] - numeric) / denom)
    return worst
