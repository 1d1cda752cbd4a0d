"""Minimal reverse-mode autodiff with the layers used by the classifiers."""

from . import kernels
from .gradcheck import finite_difference_gradient, max_relative_error
from .optim import Adam
from .params import ArchSpec, ModelParams, init_params, validate_params
from .tensor import (
    Tensor,
    affine,
    constant,
    cross_entropy_logits,
    embedding,
    exp,
    gru_cell,
    log,
    relu,
    select_step,
    sigmoid,
    softplus,
    tanh,
)

__all__ = [
    "Adam",
    "ArchSpec",
    "ModelParams",
    "Tensor",
    "affine",
    "constant",
    "cross_entropy_logits",
    "embedding",
    "exp",
    "finite_difference_gradient",
    "gru_cell",
    "init_params",
    "kernels",
    "log",
    "max_relative_error",
    "relu",
    "select_step",
    "sigmoid",
    "softplus",
    "tanh",
    "validate_params",
]
