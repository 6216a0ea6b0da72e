"""Attention decoder cell, pose readout, generator and discriminator."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from ..errors import InputError
from ..tensor import (
    Activation,
    SeededRng,
    Tensor,
    activation,
    matmul,
    reshape,
    sample_gaussian,
    sigmoid,
    stack,
)
from ..tensor import zeros as tensor_zeros
from .encoder import AttentionMemory, attention_context, rows


@dataclass(frozen=True)
class DecoderState:
    g: Tensor
    C: Tensor

    @classmethod
    def initial(cls, n: int) -> DecoderState:
        return cls(tensor_zeros(n), tensor_zeros(n))


def decoder_cell_step(
    state: DecoderState,
    x_prev: Tensor,
    c_t: Tensor,
    z_t: Tensor,
    params: Mapping[str, Tensor],
    cell_activation: Activation = "sigmoid",
) -> DecoderState:
    """One step of the decoder cell.

    The hidden output ``g`` is an affine map of the gated cell, the context and
    the noise; it has no outer squashing.
    """
    p = params
    g_prev, c_prev = state.g, state.C
    x_in = matmul(p["W_xp"], x_prev) + matmul(p["U_xp"], c_t) + matmul(p["H_xp"], z_t) + p["b_xp"]
    o = sigmoid(matmul(p["W_op"], x_in) + matmul(p["U_op"], g_prev) + p["b_op"])
    f = sigmoid(matmul(p["W_fp"], x_in) + matmul(p["U_fp"], g_prev) + p["b_fp"])
    i = sigmoid(matmul(p["W_ip"], x_in) + matmul(p["U_ip"], g_prev) + p["b_ip"])
    candidate = activation(
        matmul(p["W_cp"], x_in) + matmul(p["U_cp"], g_prev) + p["b_cp"], cell_activation
    )
    c = f * c_prev + i * candidate
    g = matmul(p["W_g"], o * c) + matmul(p["U_g"], c_t) + matmul(p["H_s"], z_t) + p["b_g"]
    return DecoderState(g, c)


def output_pose(g_t: Tensor, params: Mapping[str, Tensor]) -> Tensor:
    return matmul(params["W_x"], g_t) + params["b_x"]


def generate(
    hidden: Sequence[Tensor] | AttentionMemory,
    z: Sequence[Tensor] | Tensor,
    x0: Tensor,
    params: Mapping[str, Tensor],
    cell_activation: Activation = "sigmoid",
) -> Tensor:
    """Free-running decoder: each step consumes the pose produced by the step before.

    Returns a (len(z), n_out) tensor. With all-zero noise this is also the
    deterministic decoder used during autoencoder pretraining.
    """
    noise = rows(z)
    if not noise:
        raise InputError("generate needs a non-empty noise sequence")
    memory = hidden if isinstance(hidden, AttentionMemory) else AttentionMemory(hidden, params)
    state = DecoderState.initial(params["W_g"].shape[0])
    x_prev = x0
    outputs: list[Tensor] = []
    for z_t in noise:
        ctx = attention_context(state.g, memory, params)
        state = decoder_cell_step(state, x_prev, ctx.context, z_t, params, cell_activation)
        x_prev = output_pose(state.g, params)
        outputs.append(x_prev)
    return stack(outputs)


def discriminate(
    x: Tensor,
    hidden: Sequence[Tensor] | AttentionMemory,
    params: Mapping[str, Tensor],
    cell_activation: Activation = "sigmoid",
    steps: int | None = None,
) -> Tensor:
    """Probability that ``x`` is a real action for the encoded sentence.

    The decoder cell reads pose x_t at step t with a zero noise input; the head
    squashes the final hidden state. Returns a scalar tensor.
    """
    poses = rows(x)
    if not poses:
        raise InputError("cannot discriminate an empty action sequence")
    if steps is not None and len(poses) != steps:
        raise InputError(f"action sequence has {len(poses)} frames, expected {steps}")
    memory = hidden if isinstance(hidden, AttentionMemory) else AttentionMemory(hidden, params)
    n, n_z = params["H_s"].shape
    no_noise = tensor_zeros(n_z)
    state = DecoderState.initial(n)
    for x_t in poses:
        ctx = attention_context(state.g, memory, params)
        state = decoder_cell_step(state, x_t, ctx.context, no_noise, params, cell_activation)
    return reshape(sigmoid(matmul(params["W_d"], state.g) + params["b_d"]), ())


def sample_noise(rng: SeededRng, T_o: int, n_z: int) -> Tensor:
    """T_o i.i.d. standard normal noise vectors as a (T_o, n_z) tensor."""
    return sample_gaussian(rng, (T_o, n_z))
