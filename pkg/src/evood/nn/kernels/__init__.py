"""Kernel backend selection.

The compiled extension (`_fast`, Cython) is preferred when it was built;
otherwise the NumPy reference (`_python`) is used.  Set EVOOD_KERNELS to
"python" or "cython" to force a backend at import time, or call
`set_backend` from tests/benchmarks.  Both backends implement the same
functions with the same semantics.
"""

import os

from . import _python

_BACKENDS = {"python": _python}
try:
    from . import _fast

    _BACKENDS["cython"] = _fast
except ImportError:
    _fast = None

_FORCED = os.environ.get("EVOOD_KERNELS", "").strip().lower()
if _FORCED and _FORCED not in ("auto",):
    if _FORCED not in _BACKENDS:
        raise ImportError(
            f"EVOOD_KERNELS={_FORCED!r} requested but that backend is unavailable "
            f"(have: {sorted(_BACKENDS)})"
        )
    _active = _BACKENDS[_FORCED]
else:
    _active = _BACKENDS.get("cython", _python)


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def backend_name() -> str:
    return "cython" if _active is _fast else "python"


def set_backend(name: str) -> None:
    """Switch the dispatch target. Intended for tests and benchmarks; not
    thread-safe against in-flight forward passes."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r} (have: {sorted(_BACKENDS)})")
    _active = _BACKENDS[name]


def get_backend_module(name: str):
    return _BACKENDS[name]


def affine_forward(x, w, b):
    return _active.affine_forward(x, w, b)


def affine_backward(x, w, gy):
    return _active.affine_backward(x, w, gy)


def relu_forward(x):
    return _active.relu_forward(x)


def relu_backward(x, gy):
    return _active.relu_backward(x, gy)


def tanh_forward(x):
    return _active.tanh_forward(x)


def tanh_backward(y, gy):
    return _active.tanh_backward(y, gy)


def sigmoid_forward(x):
    return _active.sigmoid_forward(x)


def sigmoid_backward(y, gy):
    return _active.sigmoid_backward(y, gy)


def softplus_forward(x):
    return _active.softplus_forward(x)


def softplus_backward(x, gy):
    return _active.softplus_backward(x, gy)


def gru_cell_forward(*args):
    return _active.gru_cell_forward(*args)


def gru_cell_backward(*args):
    return _active.gru_cell_backward(*args)
