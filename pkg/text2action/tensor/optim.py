"""Adam optimizer over named parameter sets."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeError
from .tensor import Tensor


@dataclass
class AdamState:
    """Per-parameter first/second moments plus the shared step counter."""

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)

    def copy(self) -> AdamState:
        return AdamState(
            lr=self.lr,
            beta1=self.beta1,
            beta2=self.beta2,
            eps=self.eps,
            t=self.t,
            m={k: v.copy() for k, v in self.m.items()},
            v={k: v.copy() for k, v in self.v.items()},
        )


def adam_step(
    params: Mapping[str, Tensor],
    grads: Mapping[str, np.ndarray],
    state: AdamState,
    ascent: bool = False,
) -> tuple[dict[str, Tensor], AdamState]:
    """One Adam update. Returns new parameters and a new state; inputs are untouched.

    With ``ascent`` the step follows the gradient (maximisation) instead of
    opposing it.
    """
    if set(params) != set(grads):
        missing = sorted(set(params) ^ set(grads))
        raise ShapeError(f"parameters and gradients name different tensors: {missing}")

    new_state = state.copy()
    new_state.t = state.t + 1
    t = new_state.t
    sign = 1.0 if ascent else -1.0
    updated: dict[str, Tensor] = {}
    for name, param in params.items():
        grad = np.asarray(grads[name], dtype=np.float64)
        if grad.shape != param.shape:
            raise ShapeError(f"{name}: gradient shape {grad.shape} vs parameter {param.shape}")
        m = new_state.m.get(name)
        v = new_state.v.get(name)
        if m is None or v is None:
            m = np.zeros(param.shape)
            v = np.zeros(param.shape)
        elif m.shape != param.shape or v.shape != param.shape:
            raise ShapeError(f"{name}: Adam moment shape {m.shape} vs parameter {param.shape}")
        m = state.beta1 * m + (1.0 - state.beta1) * grad
        v = state.beta2 * v + (1.0 - state.beta2) * grad * grad
        m_hat = m / (1.0 - state.beta1**t)
        v_hat = v / (1.0 - state.beta2**t)
        step = state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
        updated[name] = Tensor(param.values + sign * step)
        new_state.m[name] = m
        new_state.v[name] = v
    return updated, new_state
