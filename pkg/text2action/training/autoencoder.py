"""Language/action autoencoder used to pretrain the text encoder and the generator."""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from ..config import TrainingConfig
from ..data import mean_first_pose
from ..embedding import EmbeddedSentence
from ..errors import InputError, NumericError
from ..logging import log_event, log_numeric_error, log_step_metrics
from ..model import (
    Params,
    attention_shapes,
    decoder_cell_shapes,
    encode,
    encoder_shapes,
    generate,
    generator_shapes,
    init_params,
    readout_shapes,
    validate_params,
)
from ..tensor import AdamState, SeededRng, Tape, Tensor, adam_step, sum_squares
from ..tensor import zeros as tensor_zeros
from .pairs import TrainingPair, batches

GROUPS = ("text_encoder", "t2a", "a2t_encoder", "a2t")


def autoencoder_shapes(config: TrainingConfig) -> dict[str, dict[str, tuple[int, ...]]]:
    n, n_e, n_x, n_z = config.n, config.n_e, config.n_x, config.n_z
    return {
        "text_encoder": encoder_shapes(n, n_e),
        "t2a": generator_shapes(n, n_x, n_z),
        "a2t_encoder": encoder_shapes(n, n_x),
        "a2t": {
            **attention_shapes(n),
            **decoder_cell_shapes(n, n_e, n_z),
            **readout_shapes(n_e, n),
        },
    }


@dataclass(frozen=True)
class AutoencoderParams:
    """Text encoder E, text-to-action decoder, and the action-to-text encoder/decoder."""

    text_encoder: Params
    t2a: Params
    a2t_encoder: Params
    a2t: Params

    @classmethod
    def init(cls, config: TrainingConfig, rng: SeededRng) -> AutoencoderParams:
        shapes = autoencoder_shapes(config)
        return cls(
            **{
                group: init_params(shapes[group], rng.spawn(k), config.init_scale)
                for k, group in enumerate(GROUPS)
            }
        )

    def groups(self) -> dict[str, Params]:
        return {group: getattr(self, group) for group in GROUPS}

    def flat(self) -> dict[str, Tensor]:
        return {
            f"{group}/{name}": tensor
            for group, params in self.groups().items()
            for name, tensor in params.items()
        }

    @classmethod
    def from_flat(cls, flat: Mapping[str, Tensor]) -> AutoencoderParams:
        groups: dict[str, Params] = {group: {} for group in GROUPS}
        for key, tensor in flat.items():
            group, name = key.split("/", 1)
            groups[group][name] = tensor
        return cls(**groups)

    def validate(self, config: TrainingConfig) -> None:
        for group, shapes in autoencoder_shapes(config).items():
            validate_params(getattr(self, group), shapes, group)


@dataclass(frozen=True)
class AutoencoderOutput:
    x_hat: Tensor  # (T_o, n_x)
    e_hat: Tensor  # (T_i, n_e)


def _as_array(values: EmbeddedSentence | np.ndarray | Tensor) -> Tensor:
    if isinstance(values, EmbeddedSentence):
        return Tensor(values.vectors)
    return values if isinstance(values, Tensor) else Tensor(values)


def autoencoder_forward(
    e: EmbeddedSentence | np.ndarray | Tensor,
    x: np.ndarray | Tensor,
    params: AutoencoderParams,
    x0: np.ndarray | Tensor,
    cell_activation: str = "sigmoid",
    a2t_input: str = "data",
) -> AutoencoderOutput:
    """Text -> action through E and the text-to-action decoder, action -> text back.

    Both decoders run free with zero noise. The text-to-action decoder starts
    from the mean first pose ``x0``; the action-to-text decoder starts from a
    zero embedding and feeds back its own reconstructions.
    """
    e_t, x_t = _as_array(e), _as_array(x)
    if e_t.ndim != 2 or e_t.shape[0] == 0 or x_t.ndim != 2 or x_t.shape[0] == 0:
        raise InputError(
            f"autoencoder needs non-empty sequences, got {e_t.shape} and {x_t.shape}"
        )
    T_i, n_e = e_t.shape
    T_o = x_t.shape[0]
    n_z = params.t2a["H_s"].shape[1]

    h = encode(e_t, params.text_encoder, cell_activation)
    x_hat = generate(h, tensor_zeros((T_o, n_z)), _as_array(x0), params.t2a, cell_activation)

    source = x_hat if a2t_input == "generated" else x_t
    s = encode(source, params.a2t_encoder, cell_activation)
    e_hat = generate(s, tensor_zeros((T_i, n_z)), tensor_zeros(n_e), params.a2t, cell_activation)
    return AutoencoderOutput(x_hat, e_hat)


def autoencoder_loss(
    x: np.ndarray | Tensor,
    x_hat: Tensor,
    e: EmbeddedSentence | np.ndarray | Tensor,
    e_hat: Tensor,
    a1: float = 1.0,
    a2: float = 5.0,
) -> Tensor:
    """a1/T_o * sum ||x_t - x_hat_t||^2 + a2/T_i * sum ||e_t - e'_t||^2."""
    x_t, e_t = _as_array(x), _as_array(e)
    if x_t.shape != x_hat.shape:
        raise InputError(f"action lengths differ: {x_t.shape} vs {x_hat.shape}")
    if e_t.shape != e_hat.shape:
        raise InputError(f"sentence lengths differ: {e_t.shape} vs {e_hat.shape}")
    T_o, T_i = x_t.shape[0], e_t.shape[0]
    return (a1 / T_o) * sum_squares(x_t - x_hat) + (a2 / T_i) * sum_squares(e_t - e_hat)


def pair_loss(
    pair: TrainingPair, params: AutoencoderParams, x0: np.ndarray, config: TrainingConfig
) -> Tensor:
    out = autoencoder_forward(
        pair.sentence, pair.action, params, x0, config.cell_activation, config.a2t_input
    )
    return autoencoder_loss(pair.action, out.x_hat, pair.sentence, out.e_hat, config.a1, config.a2)


@dataclass
class PretrainResult:
    params: AutoencoderParams
    x0: np.ndarray
    adam: AdamState
    epoch_losses: list[float] = field(default_factory=list)
    step_losses: list[float] = field(default_factory=list)


def pretrain_autoencoder(
    pairs: Sequence[TrainingPair],
    config: TrainingConfig,
    x0: np.ndarray | None = None,
    on_epoch: Callable[[int, float], None] | None = None,
) -> PretrainResult:
    """Minimise the autoencoder loss with Adam over shuffled minibatches.

    Every minibatch is one tape; the step minimises the batch-mean loss.
    """
    if not pairs:
        raise InputError("pretraining needs at least one training pair")
    if x0 is None:
        x0 = mean_first_pose(pair.action for pair in pairs)
    root = SeededRng(config.seed)
    params = AutoencoderParams.init(config, root.spawn(1))
    shuffle = root.spawn(2)
    adam = AdamState(lr=config.ae_lr)
    result = PretrainResult(params, np.asarray(x0, dtype=np.float64), adam)

    step = 0
    for epoch in range(1, config.ae_epochs + 1):
        batch_losses = []
        for batch in batches(pairs, shuffle.permutation(len(pairs)), config.batch_size):
            flat = params.flat()
            with Tape() as tape:
                tape.watch(flat)
                total = pair_loss(batch[0], params, result.x0, config)
                for pair in batch[1:]:
                    total = total + pair_loss(pair, params, result.x0, config)
                loss = total * (1.0 / len(batch))
            value = loss.item()
            step += 1
            if not np.isfinite(value):
                message = f"autoencoder loss became {value} at step {step}"
                log_numeric_error("pretrain", step, message)
                raise NumericError(message, {"records": [p.record_id for p in batch]})
            grads = tape.backward(loss, flat)
            flat, adam = adam_step(flat, grads, adam)
            params = AutoencoderParams.from_flat(flat)
            batch_losses.append(value)
            result.step_losses.append(value)
            log_step_metrics("pretrain", step, loss=value)
        epoch_loss = float(np.mean(batch_losses))
        result.epoch_losses.append(epoch_loss)
        log_event("pretrain_epoch", epoch=epoch, loss=epoch_loss)
        if on_epoch is not None:
            on_epoch(epoch, epoch_loss)

    result.params = params
    result.adam = adam
    return result
