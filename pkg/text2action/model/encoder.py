"""Recurrent text encoder and additive attention over its hidden states."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from ..errors import InputError
from ..tensor import (
    Activation,
    Tensor,
    activation,
    matmul,
    reshape,
    sigmoid,
    softmax,
    stack,
    tanh,
    unstack,
)
from ..tensor import zeros as tensor_zeros


@dataclass(frozen=True)
class EncoderState:
    h: Tensor
    C: Tensor

    @classmethod
    def initial(cls, n: int) -> EncoderState:
        return cls(tensor_zeros(n), tensor_zeros(n))


@dataclass(frozen=True)
class ContextVector:
    """Attention output for one decoder step."""

    context: Tensor
    weights: Tensor


def encoder_step(
    e_t: Tensor,
    state: EncoderState,
    params: Mapping[str, Tensor],
    cell_activation: Activation = "sigmoid",
) -> EncoderState:
    """One step of the encoder cell.

    The input bias lives in input space, so the projection is
    ``e' = W_ep (e_t + b_ep)``. ``cell_activation`` squashes both the candidate
    cell value and the cell state on the way out.
    """
    p = params
    e_proj = matmul(p["W_ep"], e_t + p["b_ep"])
    h_prev, c_prev = state.h, state.C
    o = sigmoid(matmul(p["W_o"], e_proj) + matmul(p["U_o"], h_prev) + p["b_o"])
    f = sigmoid(matmul(p["W_f"], e_proj) + matmul(p["U_f"], h_prev) + p["b_f"])
    i = sigmoid(matmul(p["W_i"], e_proj) + matmul(p["U_i"], h_prev) + p["b_i"])
    candidate = activation(
        matmul(p["W_c"], e_proj) + matmul(p["U_c"], h_prev) + p["b_c"], cell_activation
    )
    c = f * c_prev + i * candidate
    h = o * activation(c, cell_activation)
    return EncoderState(h, c)


def encode(
    inputs: Sequence[Tensor] | Tensor,
    params: Mapping[str, Tensor],
    cell_activation: Activation = "sigmoid",
) -> list[Tensor]:
    """Unroll the encoder from a zero state and return every hidden state.

    ``inputs`` is either a sequence of vectors or a (T, n_in) tensor.
    """
    steps = rows(inputs)
    if not steps:
        raise InputError("cannot encode an empty sequence")
    state = EncoderState.initial(params["W_o"].shape[0])
    hidden: list[Tensor] = []
    for e_t in steps:
        state = encoder_step(e_t, state, params, cell_activation)
        hidden.append(state.h)
    return hidden


def rows(inputs: Sequence[Tensor] | Tensor) -> list[Tensor]:
    """Per-step vectors of a sequence given as a list or as a (T, dim) tensor."""
    if isinstance(inputs, Tensor):
        if inputs.ndim != 2:
            raise InputError(f"expected a (T, dim) array of inputs, got shape {inputs.shape}")
        return unstack(inputs)
    return list(inputs)


class AttentionMemory:
    """Encoder states laid out for attention, with ``U_a h_i`` precomputed."""

    def __init__(self, hidden: Sequence[Tensor], params: Mapping[str, Tensor]):
        if len(hidden) == 0:
            raise InputError("attention needs at least one encoder state")
        self.length = len(hidden)
        self.states = stack(list(hidden), axis=1)
        self.projected = matmul(params["U_a"], self.states)


def attention_context(
    g_prev: Tensor,
    hidden: Sequence[Tensor] | AttentionMemory,
    params: Mapping[str, Tensor],
) -> ContextVector:
    """Additive attention: score each encoder state against the previous decoder state."""
    memory = hidden if isinstance(hidden, AttentionMemory) else AttentionMemory(hidden, params)
    n = params["W_a"].shape[0]
    query = reshape(matmul(params["W_a"], g_prev) + params["b_a"], (n, 1))
    scores = matmul(reshape(params["v_a"], (1, n)), tanh(query + memory.projected))
    weights = softmax(reshape(scores, (memory.length,)))
    return ContextVector(matmul(memory.states, weights), weights)
