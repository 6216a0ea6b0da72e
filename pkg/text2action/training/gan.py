"""Weight transfer from the autoencoder and adversarial training of G and D."""

from __future__ import annotations

import json
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..config import TrainingConfig
from ..embedding import EmbeddedSentence
from ..errors import InputError, NumericError
from ..logging import log_event, log_numeric_error, log_step_metrics
from ..model import (
    AttentionMemory,
    Params,
    attention_shapes,
    discriminate,
    discriminator_shapes,
    encode,
    generate,
    generator_shapes,
    init_params,
    sample_noise,
    validate_params,
)
from ..tensor import AdamState, SeededRng, Tape, Tensor, adam_step, clip, log, mean, stack
from .autoencoder import AutoencoderParams
from .pairs import TrainingPair, batches

# Decoder-cell and readout parameters G takes over from the text-to-action decoder.
SHARED_GENERATOR_PARAMS: tuple[str, ...] = (
    "W_x",
    "W_g",
    "W_op",
    "W_xp",
    "W_cp",
    "W_fp",
    "W_ip",
    "U_g",
    "U_op",
    "U_xp",
    "U_cp",
    "U_fp",
    "U_ip",
    "b_x",
    "b_g",
    "b_op",
    "b_xp",
    "b_cp",
    "b_fp",
    "b_ip",
)


def shared_parameter_names(transfer_attention: bool) -> tuple[str, ...]:
    if transfer_attention:
        return SHARED_GENERATOR_PARAMS + tuple(sorted(attention_shapes(1)))
    return SHARED_GENERATOR_PARAMS


@dataclass(frozen=True)
class StepMetrics:
    step: int
    V_D: float
    V_G: float
    mean_y_real: float
    mean_y_fake: float
    clamped: int
    y_real: tuple[float, ...] = ()
    y_fake: tuple[float, ...] = ()


@dataclass(frozen=True)
class GanState:
    """Everything adversarial training carries from one step to the next.

    ``encoder`` is the frozen text encoder E; it is never watched on a tape.
    """

    encoder: Params
    generator: Params
    discriminator: Params
    adam_g: AdamState
    adam_d: AdamState
    x0: np.ndarray
    config: TrainingConfig
    step: int = 0
    metrics: tuple[StepMetrics, ...] = field(default_factory=tuple)


def transfer_and_freeze(
    ae: AutoencoderParams, config: TrainingConfig, x0: np.ndarray, rng: SeededRng | None = None
) -> GanState:
    """Seed the GAN from a trained autoencoder.

    E is taken over as is. G copies the shared decoder weights of the
    text-to-action decoder; its noise matrices and every other parameter are
    freshly initialised, as is all of D.
    """
    rng = rng or SeededRng(config.seed).spawn(4)
    n, n_x, n_z = config.n, config.n_x, config.n_z
    ae.validate(config)

    generator = init_params(generator_shapes(n, n_x, n_z), rng.spawn(0), config.init_scale)
    shared = shared_parameter_names(config.transfer_attention)
    for name in shared:
        generator[name] = ae.t2a[name]
    discriminator = init_params(
        discriminator_shapes(n, n_x, n_z), rng.spawn(1), config.init_scale
    )
    validate_params(generator, generator_shapes(n, n_x, n_z), "generator")

    log_event(
        "weights_transferred",
        shared=list(shared),
        fresh=sorted(set(generator) - set(shared)),
    )
    return GanState(
        encoder=dict(ae.text_encoder),
        generator=generator,
        discriminator=discriminator,
        adam_g=AdamState(lr=config.alpha_g),
        adam_d=AdamState(lr=config.alpha_d),
        x0=np.asarray(x0, dtype=np.float64),
        config=config,
    )


@dataclass(frozen=True)
class ValueTerms:
    V_D: Tensor
    V_G: Tensor
    clamped: int


def value_functions(y_real: Tensor, y_fake: Tensor, eps: float = 1e-7) -> ValueTerms:
    """Batch means of log y_r + log(1 - y_f) and of log y_f.

    Probabilities are clamped to [eps, 1 - eps] first; ``clamped`` counts the
    values that had to move.
    """
    low, high = eps, 1.0 - eps
    clamped = int(
        np.count_nonzero((y_real.values < low) | (y_real.values > high))
        + np.count_nonzero((y_fake.values < low) | (y_fake.values > high))
    )
    y_r = clip(y_real, low, high)
    y_f = clip(y_fake, low, high)
    V_D = mean(log(y_r) + log(1.0 - y_f))
    V_G = mean(log(y_f))
    return ValueTerms(V_D, V_G, clamped)


def adversarial_scores(
    batch: Sequence[TrainingPair],
    noise: Sequence[Tensor],
    encoder: Params,
    generator: Params,
    discriminator: Params,
    x0: np.ndarray,
    config: TrainingConfig,
) -> tuple[Tensor, Tensor]:
    """D(x, c) on the real actions and D(G(z, c), c) on fakes, one entry per pair."""
    G, D = generator, discriminator
    start = Tensor(x0)
    real_scores, fake_scores = [], []
    for pair, z in zip(batch, noise, strict=True):
        h = encode(Tensor(pair.sentence.vectors), encoder, config.cell_activation)
        fake = generate(AttentionMemory(h, G), z, start, G, config.cell_activation)
        memory_d = AttentionMemory(h, D)
        real_scores.append(
            discriminate(Tensor(pair.action), memory_d, D, config.cell_activation, config.T_o)
        )
        fake_scores.append(discriminate(fake, memory_d, D, config.cell_activation, config.T_o))
    return stack(real_scores), stack(fake_scores)


def gan_step(batch: Sequence[TrainingPair], state: GanState, rng: SeededRng) -> GanState:
    """One discriminator ascent followed by one generator ascent on a minibatch.

    Both gradients come from the same forward pass: V_D is differentiated
    with respect to D and V_G with respect to G. E is never watched.
    """
    if not batch:
        raise InputError("a GAN step needs at least one training pair")
    config = state.config
    G, D = state.generator, state.discriminator
    noise = [sample_noise(rng, config.T_o, config.n_z) for _ in batch]

    with Tape() as tape:
        tape.watch(G)
        tape.watch(D)
        y_real, y_fake = adversarial_scores(batch, noise, state.encoder, G, D, state.x0, config)
        terms = value_functions(y_real, y_fake, config.prob_clamp)

    step = state.step + 1
    V_D, V_G = terms.V_D.item(), terms.V_G.item()
    if not (np.isfinite(V_D) and np.isfinite(V_G)):
        raise NumericError(
            f"value function became non-finite at GAN step {step} (V_D={V_D}, V_G={V_G})",
            {
                "step": step,
                "V_D": V_D,
                "V_G": V_G,
                "y_real": y_real.values.tolist(),
                "y_fake": y_fake.values.tolist(),
            },
        )
    if terms.clamped:
        log_event("probability_clamped", step=step, count=terms.clamped)

    grads_d = tape.backward(terms.V_D, D)
    grads_g = tape.backward(terms.V_G, G)
    new_d, adam_d = adam_step(D, grads_d, state.adam_d, ascent=True)
    new_g, adam_g = adam_step(G, grads_g, state.adam_g, ascent=True)

    metrics = StepMetrics(
        step=step,
        V_D=V_D,
        V_G=V_G,
        mean_y_real=float(np.mean(y_real.values)),
        mean_y_fake=float(np.mean(y_fake.values)),
        clamped=terms.clamped,
        y_real=tuple(float(v) for v in y_real.values),
        y_fake=tuple(float(v) for v in y_fake.values),
    )
    return replace(
        state,
        generator=new_g,
        discriminator=new_d,
        adam_g=adam_g,
        adam_d=adam_d,
        step=step,
        metrics=(*state.metrics, metrics),
    )


def _write_nan_dump(
    dump_dir: Path, batch: Sequence[TrainingPair], error: NumericError, step: int
) -> Path:
    dump_dir.mkdir(parents=True, exist_ok=True)
    path = dump_dir / f"nan_dump_step_{step}.json"
    payload = {
        "message": str(error),
        "records": [pair.record_id for pair in batch],
        "sentences": [list(pair.sentence.tokens) for pair in batch],
        **error.details,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, default=str)
    return path


def train_gan(
    pairs: Sequence[TrainingPair],
    state: GanState,
    dump_dir: Path | None = None,
    checkpoint_dir: Path | None = None,
    on_step: Callable[[StepMetrics], None] | None = None,
) -> GanState:
    """Run ``gan_epochs`` epochs of shuffled GAN steps.

    A non-finite value function writes a dump of the offending batch to
    ``dump_dir`` and re-raises. With ``checkpoint_every`` set, a checkpoint is
    written to ``checkpoint_dir`` every that many steps.
    """
    from .checkpoints import save_gan_checkpoint

    if not pairs:
        raise InputError("GAN training needs at least one training pair")
    config = state.config
    root = SeededRng(config.seed)
    shuffle, noise = root.spawn(10), root.spawn(11)

    for epoch in range(1, config.gan_epochs + 1):
        for batch in batches(pairs, shuffle.permutation(len(pairs)), config.batch_size):
            try:
                state = gan_step(batch, state, noise)
            except NumericError as e:
                step = state.step + 1
                dump_path = _write_nan_dump(dump_dir, batch, e, step) if dump_dir else None
                log_numeric_error("gan", step, str(e), dump_path)
                raise
            m = state.metrics[-1]
            log_step_metrics(
                "gan",
                m.step,
                V_D=m.V_D,
                V_G=m.V_G,
                mean_y_real=m.mean_y_real,
                mean_y_fake=m.mean_y_fake,
                clamped=m.clamped,
            )
            if on_step is not None:
                on_step(m)
            if checkpoint_dir and config.checkpoint_every and m.step % config.checkpoint_every == 0:
                path = save_gan_checkpoint(checkpoint_dir / f"gan_step_{m.step:06d}.t2a", state)
                log_event("checkpoint_saved", step=m.step, path=str(path))
        log_event("gan_epoch", epoch=epoch, step=state.step)
    return state


def generate_action(
    state: GanState,
    sentence: EmbeddedSentence,
    noise: Tensor,
    generator: Params | None = None,
) -> np.ndarray:
    """G(z, c) for one embedded sentence; ``generator`` overrides the state's G."""
    config = state.config
    G = generator if generator is not None else state.generator
    h = encode(Tensor(sentence.vectors), state.encoder, config.cell_activation)
    return generate(h, noise, Tensor(state.x0), G, config.cell_activation).numpy()
