"""Unit tests for the Adam optimizer."""

import numpy as np
import pytest

from text2action.errors import ShapeError
from text2action.tensor import AdamState, Tensor, adam_step


def test_first_step_moves_by_learning_rate():
    """With bias correction the first update is lr * sign(grad)."""
    params = {"w": Tensor([1.0, -1.0])}
    grads = {"w": np.array([0.5, -2.0])}
    new, state = adam_step(params, grads, AdamState(lr=0.1))
    np.testing.assert_allclose(new["w"].values, [0.9, -0.9], atol=1e-7)
    assert state.t == 1


def test_ascent_moves_with_gradient():
    params = {"w": Tensor([0.0])}
    new, _ = adam_step(params, {"w": np.array([1.0])}, AdamState(lr=0.01), ascent=True)
    assert new["w"].values[0] == pytest.approx(0.01, abs=1e-8)


def test_inputs_are_untouched():
    params = {"w": Tensor([1.0])}
    state = AdamState(lr=0.1)
    adam_step(params, {"w": np.array([1.0])}, state)
    assert state.t == 0
    assert state.m == {}
    assert params["w"].values[0] == 1.0


def test_minimises_quadratic():
    params = {"w": Tensor([3.0, -2.0])}
    state = AdamState(lr=0.1)
    for _ in range(500):
        grads = {"w": 2.0 * params["w"].values}
        params, state = adam_step(params, grads, state)
    np.testing.assert_allclose(params["w"].values, [0.0, 0.0], atol=1e-2)


def test_mismatched_names_raise():
    with pytest.raises(ShapeError, match="different tensors"):
        adam_step({"w": Tensor([1.0])}, {"v": np.array([1.0])}, AdamState())


def test_mismatched_gradient_shape_raises():
    with pytest.raises(ShapeError, match="gradient shape"):
        adam_step({"w": Tensor([1.0])}, {"w": np.array([1.0, 2.0])}, AdamState())
