"""Pure-NumPy reference implementation of the hot kernels.

This backend defines the semantics; the compiled backend must agree with
it to ~1e-12. All arrays are float64 and C-contiguous.
"""

import numpy as np


def _sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def affine_forward(x, w, b):
    return x @ w + b


def affine_backward(x, w, gy):
    return gy @ w.T, x.T @ gy, gy.sum(axis=0)


def relu_forward(x):
    return np.maximum(x, 0.0)


def relu_backward(x, gy):
    return gy * (x > 0.0)


def tanh_forward(x):
    return np.tanh(x)


def tanh_backward(y, gy):
    return gy * (1.0 - y * y)


def sigmoid_forward(x):
    return _sigmoid(x)


def sigmoid_backward(y, gy):
    return gy * y * (1.0 - y)


def softplus_forward(x):
    return np.logaddexp(0.0, x)


def softplus_backward(x, gy):
    return gy * _sigmoid(x)


def gru_cell_forward(x, hp, mask, wz, uz, bz, wr, ur, br, wh, uh, bh):
    """One masked GRU step.

    z = sig(x Wz + hp Uz + bz)        update gate (z=1 keeps the old state)
    r = sig(x Wr + hp Ur + br)        reset gate
    c = tanh(x Wh + (r*hp) Uh + bh)   candidate
    h = mask * (z*hp + (1-z)*c) + (1-mask) * hp

    Returns (h, z, r, c, rhp); the last four are cached for the backward.
    """
    z = _sigmoid(x @ wz + hp @ uz + bz)
    r = _sigmoid(x @ wr + hp @ ur + br)
    rhp = r * hp
    c = np.tanh(x @ wh + rhp @ uh + bh)
    hcell = z * hp + (1.0 - z) * c
    m = mask[:, None]
    h = m * hcell + (1.0 - m) * hp
    return h, z, r, c, rhp


def gru_cell_backward(gh, x, hp, mask, z, r, c, rhp, wz, uz, wr, ur, wh, uh):
    m = mask[:, None]
    ghcell = gh * m
    ghp = gh * (1.0 - m)
    gz = ghcell * (hp - c)
    gc = ghcell * (1.0 - z)
    ghp = ghp + ghcell * z
    gah = gc * (1.0 - c * c)
    grhp = gah @ uh.T
    ghp = ghp + grhp * r
    gar = grhp * hp * r * (1.0 - r)
    gaz = gz * z * (1.0 - z)
    gx = gaz @ wz.T + gar @ wr.T + gah @ wh.T
    ghp = ghp + gaz @ uz.T + gar @ ur.T
    return (
        gx,
        ghp,
        x.T @ gaz,
        hp.T @ gaz,
        gaz.sum(axis=0),
        x.T @ gar,
        hp.T @ gar,
        gar.sum(axis=0),
        x.T @ gah,
        rhp.T @ gah,
        gah.sum(axis=0),
    )
