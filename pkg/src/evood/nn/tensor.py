"""Reverse-mode automatic differentiation on NumPy arrays.

A Tensor wraps a float64 array plus an optional gradient buffer and the
closure that propagates gradients to its parents.  Forward passes build
the tape implicitly; `Tensor.backward()` on a scalar loss walks it in
reverse topological order.  Heavy layer ops (affine, GRU cell, pointwise
activations) dispatch through the kernel backend; everything else is
plain NumPy inline.
"""

import numpy as np

from ..errors import DomainError, ShapeError
from . import kernels as K


def _unbroadcast(g: np.ndarray, shape: tuple) -> np.ndarray:
    """Reduce a broadcast gradient back to `shape`."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g


class Tensor:
    __slots__ = ("data", "grad", "_parents", "_backward", "name")

    def __init__(self, data, parents=(), backward=None, name=None):
        self.data = np.ascontiguousarray(data, dtype=np.float64)
        self.grad = None
        self._parents = tuple(parents)
        self._backward = backward
        self.name = name

    # -- bookkeeping ---------------------------------------------------

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    def item(self) -> float:
        return float(self.data)

    def zero_grad(self):
        self.grad = None

    def _acc(self, g):
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += _unbroadcast(np.asarray(g, dtype=np.float64), self.data.shape)

    def backward(self):
        """Populate gradients of everything this scalar depends on."""
        if self.data.size != 1:
            raise ShapeError(f"backward() needs a scalar root, got shape {self.shape}")
        topo, visited = [], set()
        stack = [(self, False)]
        while stack:
            node, done = stack.pop()
            if done:
                topo.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in visited:
                    stack.append((p, False))
        self._acc(np.ones_like(self.data))
        for node in reversed(topo):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    def __repr__(self):
        tag = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}{tag})"

    # -- operators ------------------------------------------------------

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return mul(self, -1.0)

    def __sub__(self, other):
        return add(self, -_t(other))

    def __rsub__(self, other):
        return add(_t(other), -self)

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(_t(other), self)

    def __pow__(self, p):
        return pow_const(self, p)

    def __matmul__(self, other):
        return matmul(self, other)

    def sum(self, axis=None, keepdims=False):
        return tsum(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims=False):
        return tmean(self, axis=axis, keepdims=keepdims)


def _t(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(np.asarray(x, dtype=np.float64))


def constant(x, name=None) -> Tensor:
    return Tensor(np.asarray(x, dtype=np.float64), name=name)


# -- elementwise arithmetic ---------------------------------------------


def add(a, b) -> Tensor:
    a, b = _t(a), _t(b)
    out = Tensor(a.data + b.data, parents=(a, b))

    def backward(g):
        a._acc(g)
        b._acc(g)

    out._backward = backward
    return out


def mul(a, b) -> Tensor:
    a, b = _t(a), _t(b)
    out = Tensor(a.data * b.data, parents=(a, b))

    def backward(g):
        a._acc(g * b.data)
        b._acc(g * a.data)

    out._backward = backward
    return out


def div(a, b) -> Tensor:
    a, b = _t(a), _t(b)
    out = Tensor(a.data / b.data, parents=(a, b))

    def backward(g):
        a._acc(g / b.data)
        b._acc(-g * a.data / (b.data * b.data))

    out._backward = backward
    return out


def pow_const(a, p) -> Tensor:
    a = _t(a)
    p = float(p)
    out = Tensor(a.data**p, parents=(a,))

    def backward(g):
        a._acc(g * p * a.data ** (p - 1.0))

    out._backward = backward
    return out


def log(a) -> Tensor:
    a = _t(a)
    out = Tensor(np.log(a.data), parents=(a,))

    def backward(g):
        a._acc(g / a.data)

    out._backward = backward
    return out


def exp(a) -> Tensor:
    a = _t(a)
    out = Tensor(np.exp(a.data), parents=(a,))

    def backward(g):
        a._acc(g * out.data)

    out._backward = backward
    return out


# -- reductions -----------------------------------------------------------


def tsum(a, axis=None, keepdims=False) -> Tensor:
    a = _t(a)
    out = Tensor(a.data.sum(axis=axis, keepdims=keepdims), parents=(a,))

    def backward(g):
        if axis is None:
            a._acc(np.broadcast_to(g, a.data.shape))
        else:
            gg = g if keepdims else np.expand_dims(g, axis)
            a._acc(np.broadcast_to(gg, a.data.shape))

    out._backward = backward
    return out


def tmean(a, axis=None, keepdims=False) -> Tensor:
    a = _t(a)
    n = a.data.size if axis is None else a.data.shape[axis]
    return mul(tsum(a, axis=axis, keepdims=keepdims), 1.0 / n)


# -- matrix ops -----------------------------------------------------------


def matmul(a, b) -> Tensor:
    a, b = _t(a), _t(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul: incompatible shapes {a.shape} @ {b.shape}")
    out = Tensor(a.data @ b.data, parents=(a, b))

    def backward(g):
        a._acc(g @ b.data.T)
        b._acc(a.data.T @ g)

    out._backward = backward
    return out


def affine(x, w, b, name="affine") -> Tensor:
    """x @ w + b via the kernel backend."""
    x, w, b = _t(x), _t(w), _t(b)
    if x.ndim != 2 or w.ndim != 2 or x.shape[1] != w.shape[0] or b.shape != (w.shape[1],):
        raise ShapeError(
            f"{name}: x{x.shape} @ w{w.shape} + b{b.shape} is inconsistent"
        )
    out = Tensor(K.affine_forward(x.data, w.data, b.data), parents=(x, w, b), name=name)

    def backward(g):
        gx, gw, gb = K.affine_backward(x.data, w.data, np.ascontiguousarray(g))
        x._acc(gx)
        w._acc(gw)
        b._acc(gb)

    out._backward = backward
    return out


# -- pointwise activations (kernel-backed) ---------------------------------


def relu(a) -> Tensor:
    a = _t(a)
    out = Tensor(K.relu_forward(a.data), parents=(a,))

    def backward(g):
        a._acc(K.relu_backward(a.data, np.ascontiguousarray(g)))

    out._backward = backward
    return out


def tanh(a) -> Tensor:
    a = _t(a)
    out = Tensor(K.tanh_forward(a.data), parents=(a,))

    def backward(g):
        a._acc(K.tanh_backward(out.data, np.ascontiguousarray(g)))

    out._backward = backward
    return out


def sigmoid(a) -> Tensor:
    a = _t(a)
    out = Tensor(K.sigmoid_forward(a.data), parents=(a,))

    def backward(g):
        a._acc(K.sigmoid_backward(out.data, np.ascontiguousarray(g)))

    out._backward = backward
    return out


def softplus(a) -> Tensor:
    a = _t(a)
    out = Tensor(K.softplus_forward(a.data), parents=(a,))

    def backward(g):
        a._acc(K.softplus_backward(a.data, np.ascontiguousarray(g)))

    out._backward = backward
    return out


ACTIVATIONS = {"relu": relu, "tanh": tanh, "sigmoid": sigmoid, "softplus": softplus}


# -- sequence / embedding ops ----------------------------------------------


def embedding(table, ids) -> Tensor:
    """Row lookup into a (V, d) table with ids of shape (m, T)."""
    table = _t(table)
    ids = np.asarray(ids, dtype=np.int64)
    if table.ndim != 2:
        raise ShapeError(f"embedding: table must be 2-D, got {table.shape}")
    if ids.size and (ids.min() < 0 or ids.max() >= table.shape[0]):
        raise DomainError(
            f"embedding: token id out of range [0, {table.shape[0]}) in lookup"
        )
    out = Tensor(table.data[ids], parents=(table,), name="embedding")

    def backward(g):
        if table.grad is None:
            table.grad = np.zeros_like(table.data)
        np.add.at(table.grad, ids.reshape(-1), g.reshape(-1, table.shape[1]))

    out._backward = backward
    return out


def select_step(x, t: int) -> Tensor:
    """Slice timestep t from a (m, T, d) tensor."""
    x = _t(x)
    if x.ndim != 3:
        raise ShapeError(f"select_step: need a 3-D tensor, got {x.shape}")
    out = Tensor(x.data[:, t, :], parents=(x,))

    def backward(g):
        if x.grad is None:
            x.grad = np.zeros_like(x.data)
        x.grad[:, t, :] += g

    out._backward = backward
    return out


def gru_cell(x, h_prev, mask, wz, uz, bz, wr, ur, br, wh, uh, bh) -> Tensor:
    """One masked GRU step as a fused tape op (kernel-backed)."""
    x, h_prev = _t(x), _t(h_prev)
    params = [_t(p) for p in (wz, uz, bz, wr, ur, br, wh, uh, bh)]
    wz, uz, bz, wr, ur, br, wh, uh, bh = params
    de, dh = wz.shape
    if x.shape[1] != de or h_prev.shape[1] != dh or x.shape[0] != h_prev.shape[0]:
        raise ShapeError(
            f"gru_cell: x{x.shape}, h_prev{h_prev.shape} inconsistent with wz{wz.shape}"
        )
    mask = np.ascontiguousarray(mask, dtype=np.float64)
    h, z, r, c, rhp = K.gru_cell_forward(
        x.data, h_prev.data, mask,
        wz.data, uz.data, bz.data,
        wr.data, ur.data, br.data,
        wh.data, uh.data, bh.data,
    )
    out = Tensor(h, parents=(x, h_prev, *params), name="gru_cell")

    def backward(g):
        grads = K.gru_cell_backward(
            np.ascontiguousarray(g), x.data, h_prev.data, mask, z, r, c, rhp,
            wz.data, uz.data, wr.data, ur.data, wh.data, uh.data,
        )
        gx, ghp, gwz, guz, gbz, gwr, gur, gbr, gwh, guh, gbh = grads
        x._acc(gx)
        h_prev._acc(ghp)
        for p, gp in zip(params, (gwz, guz, gbz, gwr, gur, gbr, gwh, guh, gbh)):
            p._acc(gp)

    out._backward = backward
    return out


# -- fused losses -----------------------------------------------------------


def cross_entropy_logits(z, labels) -> Tensor:
    """Mean softmax cross-entropy over a batch of logits (m, K)."""
    z = _t(z)
    labels = np.asarray(labels, dtype=np.int64)
    m, k = z.shape
    if labels.shape != (m,) or (labels.size and (labels.min() < 0 or labels.max() >= k)):
        raise DomainError(f"cross_entropy: labels must be ints in [0, {k})")
    zmax = z.data.max(axis=1, keepdims=True)
    ez = np.exp(z.data - zmax)
    sez = ez.sum(axis=1, keepdims=True)
    lse = zmax[:, 0] + np.log(sez[:, 0])
    loss = float(np.mean(lse - z.data[np.arange(m), labels]))
    out = Tensor(loss, parents=(z,), name="cross_entropy")

    def backward(g):
        dz = ez / sez
        dz[np.arange(m), labels] -= 1.0
        z._acc(dz * (float(g) / m))

    out._backward = backward
    return out
