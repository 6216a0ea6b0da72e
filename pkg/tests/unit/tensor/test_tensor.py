"""Unit tests for text2action.tensor (arithmetic, tape, finite differences)."""

import numpy as np
import pytest
from scipy.special import expit

from text2action.errors import ContractError, ShapeError
from text2action.tensor import (
    Tape,
    Tensor,
    clip,
    finite_difference_gradient,
    gradient_check,
    log,
    matmul,
    mean,
    relative_error,
    reshape,
    sigmoid,
    softmax,
    stack,
    sum_squares,
    tanh,
    tensor_sum,
    unstack,
)


def test_tensor_shape_layout():
    """Tensor lays flat values out in the requested shape."""
    t = Tensor([1, 2, 3, 4, 5, 6], shape=(2, 3))
    assert t.shape == (2, 3)
    assert t.values[1, 0] == 4.0


def test_tensor_shape_mismatch_raises():
    with pytest.raises(ShapeError, match="needs 6"):
        Tensor([1, 2, 3], shape=(2, 3))


def test_tensor_is_read_only():
    t = Tensor([1.0, 2.0])
    with pytest.raises(ValueError):
        t.values[0] = 5.0
    copy = t.numpy()
    copy[0] = 5.0
    assert t.values[0] == 1.0


def test_matmul_example():
    a = Tensor([[1, 2], [3, 4]])
    b = Tensor([[5], [6]])
    np.testing.assert_array_equal(matmul(a, b).values, [[17], [39]])


def test_matmul_vector():
    np.testing.assert_array_equal((Tensor([[1, 0], [0, 2]]) @ Tensor([3, 4])).values, [3, 8])


def test_matmul_misaligned_raises():
    with pytest.raises(ShapeError, match="not aligned"):
        matmul(Tensor(np.ones((2, 3))), Tensor(np.ones((2, 3))))


def test_add_rejects_incompatible_shapes():
    with pytest.raises(ShapeError, match="do not broadcast"):
        Tensor([1.0, 2.0]) + Tensor([1.0, 2.0, 3.0])


def test_softmax_sums_to_one_and_is_shift_invariant():
    x = Tensor([1.0, 2.0, 3.0])
    s = softmax(x).values
    assert s.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(softmax(x + 100.0).values, s)
    assert np.argmax(s) == 2


def test_softmax_large_inputs_stay_finite():
    s = softmax(Tensor([1000.0, 1000.0])).values
    np.testing.assert_allclose(s, [0.5, 0.5])


def test_softmax_rejects_empty():
    with pytest.raises(ShapeError):
        softmax(Tensor(np.zeros(0)))


def test_sigmoid_matches_expit():
    x = np.linspace(-5, 5, 11)
    np.testing.assert_allclose(sigmoid(Tensor(x)).values, expit(x))


def test_item_needs_single_value():
    assert Tensor([[2.5]]).item() == 2.5
    with pytest.raises(ContractError):
        Tensor([1.0, 2.0]).item()


def test_untracked_ops_are_not_recorded():
    """Operations on constants leave the tape empty."""
    with Tape() as tape:
        Tensor([1.0]) + Tensor([2.0])
    assert len(tape) == 0


def test_backward_of_sum_squares():
    w = Tensor([1.0, -2.0, 3.0])
    with Tape() as tape:
        tape.watch([w])
        loss = sum_squares(w)
    grads = tape.backward(loss, {"w": w})
    np.testing.assert_allclose(grads["w"], [2.0, -4.0, 6.0])


def test_backward_accumulates_reused_tensor():
    """A tensor used twice receives the sum of both contributions."""
    w = Tensor(3.0)
    with Tape() as tape:
        tape.watch([w])
        loss = w * w + w
    assert tape.backward(loss, {"w": w})["w"] == pytest.approx(7.0)


def test_backward_zero_for_unused_parameter():
    used, unused = Tensor([1.0]), Tensor([[1.0, 2.0]])
    with Tape() as tape:
        tape.watch({"used": used, "unused": unused})
        loss = tensor_sum(used * 2.0)
    grads = tape.backward(loss, {"used": used, "unused": unused})
    np.testing.assert_array_equal(grads["unused"], np.zeros((1, 2)))
    np.testing.assert_array_equal(grads["used"], [2.0])


def test_backward_rejects_non_scalar():
    w = Tensor([1.0, 2.0])
    with Tape() as tape:
        tape.watch([w])
        out = w * 2.0
    with pytest.raises(ContractError, match="scalar"):
        tape.backward(out, {"w": w})


def test_clip_gradient_zero_outside_range():
    x = Tensor([-1.0, 0.5, 2.0])
    with Tape() as tape:
        tape.watch([x])
        loss = tensor_sum(clip(x, 0.0, 1.0))
    np.testing.assert_array_equal(tape.backward(loss, {"x": x})["x"], [0.0, 1.0, 0.0])


def test_stack_unstack_inverse():
    rows = [Tensor([1.0, 2.0]), Tensor([3.0, 4.0])]
    stacked = stack(rows)
    assert stacked.shape == (2, 2)
    back = unstack(stacked)
    np.testing.assert_array_equal(back[1].values, [3.0, 4.0])
    assert stack(rows, axis=1).shape == (2, 2)


def test_finite_difference_matches_known_derivative():
    grad = finite_difference_gradient(lambda x: tensor_sum(x * x * x), np.array([1.0, 2.0]))
    np.testing.assert_allclose(grad, [3.0, 12.0], rtol=1e-6)


def test_gradient_check_composite_graph():
    """Every primitive composes to gradients that agree with central differences."""
    rng = np.random.default_rng(0)
    params = {
        "A": Tensor(rng.uniform(-0.5, 0.5, (3, 4))),
        "b": Tensor(rng.uniform(-0.5, 0.5, 3)),
        "v": Tensor(rng.uniform(0.2, 0.8, 4)),
    }

    def loss_fn(p):
        hidden = tanh(matmul(p["A"], p["v"]) + p["b"])
        weights = softmax(hidden)
        gate = sigmoid(reshape(p["A"], (12,)))
        probs = clip(sigmoid(hidden), 1e-7, 1 - 1e-7)
        return (
            tensor_sum(weights * hidden)
            + mean(gate)
            + mean(log(probs))
            + sum_squares(stack([p["b"], hidden]))
        )

    errors = gradient_check(loss_fn, params)
    assert max(errors.values()) < 1e-6


def test_relative_error_floor():
    a = np.array([2e-7, 0.0])
    b = np.array([2.0006e-7, 0.0])
    assert relative_error(a, b) > 1e-4
    assert relative_error(a, b, floor=1e-6) < 1e-4
    assert relative_error(np.zeros(3), np.zeros(3)) == 0.0
    assert relative_error(np.array([1.0]), np.array([3.0])) == pytest.approx(0.5)
