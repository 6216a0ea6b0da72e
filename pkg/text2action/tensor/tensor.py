"""Dense float64 tensors with define-by-run reverse-mode differentiation.

A :class:`Tape` records every primitive whose inputs depend on a watched
parameter while it is active. ``Tape.backward`` replays the recorded adjoints
in reverse recording order, which is a reverse topological order of the graph
because an operation can only consume tensors that already exist.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Mapping, Sequence
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import expit

from ..errors import ContractError, InputError, ShapeError

Activation = Literal["sigmoid", "tanh"]
VJP = Callable[[np.ndarray], tuple[np.ndarray | None, ...]]

_ACTIVE_TAPE: ContextVar[Tape | None] = ContextVar("text2action_active_tape", default=None)


class Tensor:
    """Immutable n-dimensional array of 64-bit floats.

    Identity matters: the tape tracks tensors by object identity, so two
    tensors with equal values are still distinct graph nodes.
    """

    __slots__ = ("_data", "__weakref__")
    __array_priority__ = 100.0

    def __init__(self, values, shape: Sequence[int] | None = None):
        data = np.array(values, dtype=np.float64)
        if shape is not None:
            shape = tuple(int(s) for s in shape)
            if data.size != math.prod(shape):
                raise ShapeError(
                    f"cannot lay out {data.size} values as shape {shape} "
                    f"(needs {math.prod(shape)})"
                )
            data = data.reshape(shape)
        data.setflags(write=False)
        self._data = data

    @classmethod
    def _wrap(cls, data: np.ndarray) -> Tensor:
        out = cls.__new__(cls)
        data = np.asarray(data, dtype=np.float64)
        if data.flags.writeable:
            data.setflags(write=False)
        out._data = data
        return out

    @property
    def values(self) -> np.ndarray:
        """Read-only view of the stored values."""
        return self._data

    @property
    def shape(self) -> tuple[int, ...]:
        return self._data.shape

    @property
    def ndim(self) -> int:
        return self._data.ndim

    @property
    def size(self) -> int:
        return self._data.size

    def numpy(self) -> np.ndarray:
        """Writable copy of the values."""
        return np.array(self._data)

    def item(self) -> float:
        if self._data.size != 1:
            raise ContractError(f"item() needs a single value, tensor has shape {self.shape}")
        return float(self._data.reshape(()))

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, values={self._data!r})"

    def __add__(self, other) -> Tensor:
        return add(self, other)

    def __radd__(self, other) -> Tensor:
        return add(other, self)

    def __sub__(self, other) -> Tensor:
        return sub(self, other)

    def __rsub__(self, other) -> Tensor:
        return sub(other, self)

    def __mul__(self, other) -> Tensor:
        return mul(self, other)

    def __rmul__(self, other) -> Tensor:
        return mul(other, self)

    def __neg__(self) -> Tensor:
        return neg(self)

    def __matmul__(self, other) -> Tensor:
        return matmul(self, other)


TensorLike = Tensor | np.ndarray | float | int | Sequence[float]


def as_tensor(value: TensorLike) -> Tensor:
    """Return ``value`` unchanged if it is a Tensor, else a constant Tensor."""
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def zeros(shape: Sequence[int] | int) -> Tensor:
    return Tensor._wrap(np.zeros(shape))


@dataclass(frozen=True, slots=True)
class _Node:
    op: str
    output: Tensor
    inputs: tuple[Tensor, ...]
    vjp: VJP


class Tape:
    """Ordered record of primitive operations, replayable for adjoints."""

    def __init__(self) -> None:
        self._nodes: list[_Node] = []
        self._tracked: set[int] = set()
        # Keeps watched leaves alive so their ids are never reused.
        self._leaves: list[Tensor] = []
        self._tokens: list = []

    def __enter__(self) -> Tape:
        self._tokens.append(_ACTIVE_TAPE.set(self))
        return self

    def __exit__(self, *exc) -> None:
        _ACTIVE_TAPE.reset(self._tokens.pop())

    def __len__(self) -> int:
        return len(self._nodes)

    def watch(self, params: Mapping[str, Tensor] | Iterable[Tensor]) -> None:
        """Mark tensors as differentiation sources."""
        tensors = params.values() if isinstance(params, Mapping) else params
        for tensor in tensors:
            if id(tensor) not in self._tracked:
                self._tracked.add(id(tensor))
                self._leaves.append(tensor)

    def is_tracked(self, tensor: Tensor) -> bool:
        return id(tensor) in self._tracked

    def record(self, op: str, output: Tensor, inputs: tuple[Tensor, ...], vjp: VJP) -> None:
        if any(id(t) in self._tracked for t in inputs):
            self._nodes.append(_Node(op, output, inputs, vjp))
            self._tracked.add(id(output))

    def backward(self, loss: Tensor, params: Mapping[str, Tensor]) -> dict[str, np.ndarray]:
        """Gradient of a scalar ``loss`` with respect to every tensor in ``params``.

        Parameters that do not influence the loss receive zero gradients.
        """
        if loss.size != 1:
            raise ContractError(f"backward needs a scalar loss, got shape {loss.shape}")
        grads: dict[int, np.ndarray] = {}
        if id(loss) in self._tracked:
            grads[id(loss)] = np.ones(loss.shape)
        for node in reversed(self._nodes):
            upstream = grads.pop(id(node.output), None)
            if upstream is None:
                continue
            for tensor, grad in zip(node.inputs, node.vjp(upstream), strict=True):
                if grad is None or id(tensor) not in self._tracked:
                    continue
                key = id(tensor)
                grads[key] = grads[key] + grad if key in grads else grad
        return {
            name: np.array(grads.get(id(p), np.zeros(p.shape)), dtype=np.float64).reshape(p.shape)
            for name, p in params.items()
        }


def active_tape() -> Tape | None:
    return _ACTIVE_TAPE.get()


def _emit(op: str, data: np.ndarray, inputs: tuple[Tensor, ...], vjp: VJP) -> Tensor:
    out = Tensor._wrap(data)
    tape = _ACTIVE_TAPE.get()
    if tape is not None:
        tape.record(op, out, inputs, vjp)
    return out


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum ``grad`` down to ``shape`` (inverse of numpy broadcasting)."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _broadcast_shape(a: Tensor, b: Tensor, op: str) -> None:
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError as e:
        raise ShapeError(f"{op}: shapes {a.shape} and {b.shape} do not broadcast") from e


def add(a: TensorLike, b: TensorLike) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape(a, b, "add")
    sa, sb = a.shape, b.shape
    return _emit(
        "add",
        a.values + b.values,
        (a, b),
        lambda g: (_unbroadcast(g, sa), _unbroadcast(g, sb)),
    )


def sub(a: TensorLike, b: TensorLike) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape(a, b, "sub")
    sa, sb = a.shape, b.shape
    return _emit(
        "sub",
        a.values - b.values,
        (a, b),
        lambda g: (_unbroadcast(g, sa), _unbroadcast(-g, sb)),
    )


def mul(a: TensorLike, b: TensorLike) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape(a, b, "mul")
    av, bv = a.values, b.values
    return _emit(
        "mul",
        av * bv,
        (a, b),
        lambda g: (_unbroadcast(g * bv, av.shape), _unbroadcast(g * av, bv.shape)),
    )


def neg(a: TensorLike) -> Tensor:
    a = as_tensor(a)
    return _emit("neg", -a.values, (a,), lambda g: (-g,))


def matmul(a: TensorLike, b: TensorLike) -> Tensor:
    """Matrix product ``a @ b`` for ``a`` of shape (m, k) and ``b`` of shape (k, n) or (k,)."""
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 2 or b.ndim not in (1, 2) or a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul: shapes {a.shape} and {b.shape} are not aligned")
    av, bv = a.values, b.values

    def vjp(g: np.ndarray):
        grad_a = np.outer(g, bv) if bv.ndim == 1 else g @ bv.T
        return grad_a, av.T @ g

    return _emit("matmul", av @ bv, (a, b), vjp)


def sigmoid(x: TensorLike) -> Tensor:
    x = as_tensor(x)
    s = expit(x.values)
    return _emit("sigmoid", s, (x,), lambda g: (g * s * (1.0 - s),))


def tanh(x: TensorLike) -> Tensor:
    x = as_tensor(x)
    t = np.tanh(x.values)
    return _emit("tanh", t, (x,), lambda g: (g * (1.0 - t * t),))


def activation(x: TensorLike, kind: Activation) -> Tensor:
    """Elementwise sigmoid or tanh."""
    if kind == "sigmoid":
        return sigmoid(x)
    if kind == "tanh":
        return tanh(x)
    raise InputError(f"unknown activation '{kind}' (expected 'sigmoid' or 'tanh')")


def softmax(x: TensorLike) -> Tensor:
    """Softmax of a vector, shifted by its maximum for stability."""
    x = as_tensor(x)
    if x.ndim != 1 or x.size == 0:
        raise ShapeError(f"softmax needs a non-empty vector, got shape {x.shape}")
    e = np.exp(x.values - x.values.max())
    s = e / e.sum()
    return _emit("softmax", s, (x,), lambda g: (s * (g - np.dot(g, s)),))


def log(x: TensorLike) -> Tensor:
    x = as_tensor(x)
    xv = x.values
    return _emit("log", np.log(xv), (x,), lambda g: (g / xv,))


def clip(x: TensorLike, low: float, high: float) -> Tensor:
    """Clamp into [low, high]; the gradient is zero where clamping happened."""
    x = as_tensor(x)
    xv = x.values
    inside = (xv >= low) & (xv <= high)
    return _emit("clip", np.clip(xv, low, high), (x,), lambda g: (g * inside,))


def sum(x: TensorLike) -> Tensor:
    x = as_tensor(x)
    shape = x.shape
    return _emit("sum", np.asarray(x.values.sum()), (x,), lambda g: (np.broadcast_to(g, shape),))


def mean(x: TensorLike) -> Tensor:
    x = as_tensor(x)
    shape, count = x.shape, x.size
    return _emit(
        "mean",
        np.asarray(x.values.mean()),
        (x,),
        lambda g: (np.broadcast_to(g / count, shape),),
    )


def reshape(x: TensorLike, shape: Sequence[int]) -> Tensor:
    x = as_tensor(x)
    original = x.shape
    shape = tuple(shape)
    if math.prod(shape) != x.size:
        raise ShapeError(f"reshape: cannot view shape {original} as {shape}")
    return _emit("reshape", x.values.reshape(shape), (x,), lambda g: (g.reshape(original),))


def stack(tensors: Sequence[TensorLike], axis: int = 0) -> Tensor:
    """Stack equally shaped tensors along a new axis."""
    items = tuple(as_tensor(t) for t in tensors)
    if not items:
        raise ShapeError("stack needs at least one tensor")
    first = items[0].shape
    for t in items[1:]:
        if t.shape != first:
            raise ShapeError(f"stack: shapes {first} and {t.shape} differ")
    data = np.stack([t.values for t in items], axis=axis)

    def vjp(g: np.ndarray):
        return tuple(np.take(g, i, axis=axis) for i in range(len(items)))

    return _emit("stack", data, items, vjp)


def unstack(x: TensorLike) -> list[Tensor]:
    """Split along the first axis; the inverse of ``stack(..., axis=0)``."""
    x = as_tensor(x)
    if x.ndim == 0:
        raise ShapeError("unstack needs at least one axis")
    shape = x.shape

    def row_vjp(i: int) -> VJP:
        def vjp(g: np.ndarray):
            full = np.zeros(shape)
            full[i] = g
            return (full,)

        return vjp

    return [_emit("unstack", x.values[i], (x,), row_vjp(i)) for i in range(shape[0])]


def sum_squares(x: TensorLike) -> Tensor:
    x = as_tensor(x)
    return sum(mul(x, x))
