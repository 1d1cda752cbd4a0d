"""Finite-difference gradient oracle.

Central differences (f(x+h) - f(x-h)) / 2h per coordinate.  Independent
of the tape: it only re-evaluates the loss closure, so it can vet any
backward implementation in the package.
"""

import numpy as np

from .tensor import Tensor


def finite_difference_gradient(loss_fn, tensors: dict[str, Tensor], h: float = 1e-5):
    """Numeric gradient of `loss_fn()` w.r.t. every entry of `tensors`.

    `loss_fn` must be a deterministic closure over the tensor data.
    Returns {name: ndarray} with the same shapes as the inputs.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    out = {}
    for name, t in tensors.items():
        flat = t.data.reshape(-1)
        g = np.zeros_like(flat)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            f_plus = float(loss_fn())
            flat[i] = orig - h
            f_minus = float(loss_fn())
            flat[i] = orig
            g[i] = (f_plus - f_minus) / (2.0 * h)
        out[name] = g.reshape(t.data.shape)
    return out


def max_relative_error(analytic: dict, numeric: dict) -> float:
    """Largest per-tensor scale-relative deviation between two gradient sets.

    For each tensor: max |a - n| / (max(|a|, |n|) + 1e-12), where the
    denominator is the tensor-wide magnitude so that near-zero coordinates
    of an otherwise healthy gradient do not blow up the ratio.
    """
    worst = 0.0
    for name, a in analytic.items():
        n = numeric[name]
        scale = max(np.abs(a).max(initial=0.0), np.abs(n).max(initial=0.0)) + 1e-12
        worst = max(worst, float(np.abs(a - n).max(initial=0.0) / scale))
    return worst
