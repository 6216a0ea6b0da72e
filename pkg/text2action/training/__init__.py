"""Autoencoder pretraining, weight transfer and adversarial training."""

from .autoencoder import (
    AutoencoderOutput,
    AutoencoderParams,
    PretrainResult,
    autoencoder_forward,
    autoencoder_loss,
    autoencoder_shapes,
    pretrain_autoencoder,
)
from .checkpoints import (
    AutoencoderCheckpoint,
    check_dimensions,
    load_autoencoder_checkpoint,
    load_gan_checkpoint,
    read_metrics_csv,
    save_autoencoder_checkpoint,
    save_gan_checkpoint,
    write_loss_csv,
    write_metrics_csv,
)
from .gan import (
    SHARED_GENERATOR_PARAMS,
    GanState,
    StepMetrics,
    ValueTerms,
    adversarial_scores,
    gan_step,
    generate_action,
    shared_parameter_names,
    train_gan,
    transfer_and_freeze,
    value_functions,
)
from .pairs import TrainingPair, prepare_pairs

__all__ = [
    "SHARED_GENERATOR_PARAMS",
    "AutoencoderCheckpoint",
    "AutoencoderOutput",
    "AutoencoderParams",
    "GanState",
    "PretrainResult",
    "StepMetrics",
    "TrainingPair",
    "ValueTerms",
    "adversarial_scores",
    "autoencoder_forward",
    "autoencoder_loss",
    "autoencoder_shapes",
    "check_dimensions",
    "gan_step",
    "generate_action",
    "load_autoencoder_checkpoint",
    "load_gan_checkpoint",
    "prepare_pairs",
    "pretrain_autoencoder",
    "read_metrics_csv",
    "save_autoencoder_checkpoint",
    "save_gan_checkpoint",
    "shared_parameter_names",
    "train_gan",
    "transfer_and_freeze",
    "value_functions",
    "write_loss_csv",
    "write_metrics_csv",
]
