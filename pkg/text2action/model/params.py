"""Named parameter sets and their shape tables.

Every parameter group is a flat ``dict[str, Tensor]``. Names follow the cell
equations with primes spelled ``p`` (``W_ep`` is W_e', ``U_op`` is U_o').
"""

from __future__ import annotations

from collections.abc import Mapping

import numpy as np

from ..errors import ShapeError
from ..tensor import SeededRng, Tensor

Shapes = dict[str, tuple[int, ...]]
Params = dict[str, Tensor]

ENCODER_GATES = ("o", "c", "f", "i")
DECODER_GATES = ("op", "cp", "fp", "ip")


def encoder_shapes(n: int, n_in: int) -> Shapes:
    """Encoder cell: input projection W_ep (n x n_in) with bias b_ep in input space."""
    shapes: Shapes = {"W_ep": (n, n_in), "b_ep": (n_in,)}
    for gate in ENCODER_GATES:
        shapes[f"W_{gate}"] = (n, n)
        shapes[f"U_{gate}"] = (n, n)
        shapes[f"b_{gate}"] = (n,)
    return shapes


def attention_shapes(n: int) -> Shapes:
    return {"W_a": (n, n), "U_a": (n, n), "v_a": (n,), "b_a": (n,)}


def decoder_cell_shapes(n: int, n_in: int, n_z: int) -> Shapes:
    """Decoder cell gamma over inputs of size ``n_in`` with ``n_z`` noise channels."""
    shapes: Shapes = {
        "W_xp": (n, n_in),
        "U_xp": (n, n),
        "H_xp": (n, n_z),
        "b_xp": (n,),
        "W_g": (n, n),
        "U_g": (n, n),
        "H_s": (n, n_z),
        "b_g": (n,),
    }
    for gate in DECODER_GATES:
        shapes[f"W_{gate}"] = (n, n)
        shapes[f"U_{gate}"] = (n, n)
        shapes[f"b_{gate}"] = (n,)
    return shapes


def readout_shapes(n_out: int, n: int) -> Shapes:
    return {"W_x": (n_out, n), "b_x": (n_out,)}


def head_shapes(n: int) -> Shapes:
    return {"W_d": (1, n), "b_d": ()}


def generator_shapes(n: int, n_x: int, n_z: int) -> Shapes:
    return {**attention_shapes(n), **decoder_cell_shapes(n, n_x, n_z), **readout_shapes(n_x, n)}


def discriminator_shapes(n: int, n_x: int, n_z: int) -> Shapes:
    return {**attention_shapes(n), **decoder_cell_shapes(n, n_x, n_z), **head_shapes(n)}


def is_bias(name: str) -> bool:
    return name.startswith("b_")


def init_params(shapes: Mapping[str, tuple[int, ...]], rng: SeededRng, scale: float) -> Params:
    """Fresh parameters: weights uniform in [-scale, scale], biases zero.

    Draws happen in sorted-name order so the result does not depend on how the
    shape table was assembled.
    """
    params: Params = {}
    for name in sorted(shapes):
        shape = shapes[name]
        if is_bias(name):
            params[name] = Tensor(np.zeros(shape))
        else:
            params[name] = Tensor(rng.uniform(-scale, scale, shape))
    return params


def zero_params(shapes: Mapping[str, tuple[int, ...]]) -> Params:
    return {name: Tensor(np.zeros(shape)) for name, shape in shapes.items()}


def validate_params(
    params: Mapping[str, Tensor], shapes: Mapping[str, tuple[int, ...]], group: str
) -> None:
    """Raise ShapeError unless ``params`` holds every tensor of ``shapes`` at its shape."""
    missing = sorted(set(shapes) - set(params))
    if missing:
        raise ShapeError(f"{group}: missing parameters {missing}")
    for name, shape in shapes.items():
        if params[name].shape != tuple(shape):
            raise ShapeError(
                f"{group}.{name}: expected shape {tuple(shape)}, got {params[name].shape}"
            )
