"""Central finite differences, used as the oracle for ``Tape.backward``."""

from collections.abc import Callable, Mapping

import numpy as np

from .tensor import Tape, Tensor, TensorLike


def _scalar(value: Tensor | float) -> float:
    if isinstance(value, Tensor):
        return value.item()
    return float(value)


def finite_difference_gradient(
    f: Callable[[Tensor], Tensor | float],
    x: TensorLike,
    h: float = 1e-5,
) -> np.ndarray:
    """Central difference (f(x + h·eᵢ) − f(x − h·eᵢ)) / 2h for each coordinate."""
    base = np.array(x.values if isinstance(x, Tensor) else x, dtype=np.float64)
    grad = np.zeros_like(base)
    flat = base.reshape(-1)
    out = grad.reshape(-1)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + h
        plus = _scalar(f(Tensor(base)))
        flat[i] = original - h
        minus = _scalar(f(Tensor(base)))
        flat[i] = original
        out[i] = (plus - minus) / (2.0 * h)
    return grad


def relative_error(a: np.ndarray, b: np.ndarray, floor: float = 1e-12) -> float:
    """‖a − b‖ / max(‖a‖ + ‖b‖, floor); zero when both are zero.

    Below ``floor`` the comparison is absolute.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    denom = max(float(np.linalg.norm(a) + np.linalg.norm(b)), floor)
    return float(np.linalg.norm(a - b)) / denom


def gradient_check(
    loss_fn: Callable[[Mapping[str, Tensor]], Tensor],
    params: Mapping[str, Tensor],
    h: float = 1e-5,
    floor: float = 1e-12,
) -> dict[str, float]:
    """Relative error between analytical and numerical gradients, per parameter.

    ``loss_fn`` must build a scalar from the mapping it is given and must not
    hold on to tensors from a previous call.
    """
    with Tape() as tape:
        tape.watch(params)
        loss = loss_fn(params)
    analytical = tape.backward(loss, params)

    errors: dict[str, float] = {}
    for name, tensor in params.items():

        def perturbed(x: Tensor, name: str = name) -> Tensor:
            return loss_fn({**params, name: x})

        numerical = finite_difference_gradient(perturbed, tensor, h)
        errors[name] = relative_error(analytical[name], numerical, floor)
    return errors
