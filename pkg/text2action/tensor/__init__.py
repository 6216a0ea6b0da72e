"""Tensor core: dense float64 arithmetic, reverse-mode differentiation, Adam, seeded sampling."""

from .gradcheck import finite_difference_gradient, gradient_check, relative_error
from .optim import AdamState, adam_step
from .rng import SeededRng, sample_gaussian
from .tensor import (
    Activation,
    Tape,
    Tensor,
    activation,
    active_tape,
    add,
    as_tensor,
    clip,
    log,
    matmul,
    mean,
    mul,
    neg,
    reshape,
    sigmoid,
    softmax,
    stack,
    sub,
    sum_squares,
    tanh,
    unstack,
    zeros,
)
from .tensor import sum as tensor_sum

__all__ = [
    "Activation",
    "AdamState",
    "SeededRng",
    "Tape",
    "Tensor",
    "activation",
    "active_tape",
    "adam_step",
    "add",
    "as_tensor",
    "clip",
    "finite_difference_gradient",
    "gradient_check",
    "log",
    "matmul",
    "mean",
    "mul",
    "neg",
    "relative_error",
    "reshape",
    "sample_gaussian",
    "sigmoid",
    "softmax",
    "stack",
    "sub",
    "sum_squares",
    "tanh",
    "tensor_sum",
    "unstack",
    "zeros",
]
