"""Encoder, attention, decoder cells and parameter containers."""

from .cells import (
    DecoderState,
    decoder_cell_step,
    discriminate,
    generate,
    output_pose,
    sample_noise,
)
from .checkpoint import Checkpoint, flatten_groups, load_checkpoint, save_checkpoint
from .encoder import (
    AttentionMemory,
    ContextVector,
    EncoderState,
    attention_context,
    encode,
    encoder_step,
)
from .params import (
    Params,
    attention_shapes,
    decoder_cell_shapes,
    discriminator_shapes,
    encoder_shapes,
    generator_shapes,
    head_shapes,
    init_params,
    readout_shapes,
    validate_params,
    zero_params,
)

__all__ = [
    "AttentionMemory",
    "Checkpoint",
    "ContextVector",
    "DecoderState",
    "EncoderState",
    "Params",
    "attention_context",
    "attention_shapes",
    "decoder_cell_shapes",
    "decoder_cell_step",
    "discriminate",
    "discriminator_shapes",
    "encode",
    "encoder_shapes",
    "encoder_step",
    "flatten_groups",
    "generate",
    "generator_shapes",
    "head_shapes",
    "init_params",
    "load_checkpoint",
    "output_pose",
    "readout_shapes",
    "sample_noise",
    "save_checkpoint",
    "validate_params",
    "zero_params",
]
