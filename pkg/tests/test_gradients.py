import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tensorscene.errors import DimensionError
from tensorscene.gradients import is_divergence, loss_and_gradients
from tensorscene.model import Activation, FactorModel

from .oracles import finite_difference_grads, relative_gradient_error


def test_is_divergence_identity_is_zero(rng):
    x = rng.random((3, 4)) + 0.1
    assert is_divergence(x, x) == 0.0


def test_is_divergence_hand_values():
    two, one = np.array([2.0]), np.array([1.0])
    assert is_divergence(two, one) == pytest.approx(2.0 - np.log(2.0) - 1.0)
    assert is_divergence(one, two) == pytest.approx(0.5 - np.log(0.5) - 1.0)
    assert is_divergence(two, one) == pytest.approx(0.306853, abs=1e-6)
    assert is_divergence(one, two) == pytest.approx(0.193147, abs=1e-6)


def test_is_divergence_shape_mismatch():
    with pytest.raises(DimensionError):
        is_divergence(np.ones(3), np.ones(4))


@given(seed=st.integers(0, 2**16))
def test_is_divergence_nonnegative_zero_iff_equal(seed):
    gen = np.random.default_rng(seed)
    x = gen.random((3, 3)) * 2
    y = gen.random((3, 3)) * 2
    d = is_divergence(x, y)
    assert d >= 0.0
    eps = 1e-8
    floored_equal = np.array_equal(np.maximum(x, eps), np.maximum(y, eps))
    assert (d == 0.0) == floored_equal


def test_is_divergence_flooring_handles_zeros():
    x = np.zeros((2, 2))
    assert is_divergence(x, x) == 0.0
    assert np.isfinite(is_divergence(x, np.ones((2, 2))))


def _random_instance(seed, h_activation=Activation.SOFTPLUS, c=3, f=4, t=4, k=2):
    gen = np.random.default_rng(seed)
    model = FactorModel(
        dec_channel=gen.uniform(-1, 1, (c, k)),
        dec_freq=gen.uniform(-1, 1, (f, k)),
        enc_channel=gen.uniform(-1, 1, (k, c)),
        enc_freq=gen.uniform(-1, 1, (k, f)),
        h_activation=h_activation,
    )
    x = gen.random((t, c * f)) + 0.05
    return model, x


def fd_reference(model, x, step=1e-5):
    def loss_of(params):
        probe = FactorModel(
            dec_channel=params["dec_channel"],
            dec_freq=params["dec_freq"],
            enc_channel=params["enc_channel"],
            enc_freq=params["enc_freq"],
            h_activation=model.h_activation,
        )
        return loss_and_gradients(probe, x)[0]

    params = {k: v.copy() for k, v in model.parameters().items()}
    return finite_difference_grads(loss_of, params, step=step)


def test_gradients_match_finite_differences():
    for seed in range(3):
        model, x = _random_instance(seed, c=2, f=3, t=4, k=2)
        _, grads = loss_and_gradients(model, x)
        numeric = fd_reference(model, x)
        assert relative_gradient_error(grads, numeric) < 1e-4


def test_gradient_zero_at_exact_reconstruction():
    # Scalar instance built so decode(encode(x)) == x: a stationary point of
    # the divergence, so every gradient must vanish.
    x = np.array([[1.0]])
    ec, ef = 0.6, 0.5
    h = np.logaddexp(0.0, x[0, 0] * ec * ef)
    inv_softplus = lambda y: np.log(np.expm1(y))
    model = FactorModel(
        dec_channel=np.array([[inv_softplus(1.0 / h)]]),
        dec_freq=np.array([[inv_softplus(1.0)]]),
        enc_channel=np.array([[ec]]),
        enc_freq=np.array([[ef]]),
    )
    loss, grads = loss_and_gradients(model, x)
    assert loss < 1e-12
    for g in grads.values():
        assert np.max(np.abs(g)) < 1e-8


def test_dead_relu_units_have_zero_encoder_gradient(rng):
    # all pre-activations negative -> encoder side of the graph is cut off
    k, c, f = 2, 2, 3
    model = FactorModel(
        dec_channel=rng.random((c, k)),
        dec_freq=rng.random((f, k)),
        enc_channel=-np.ones((k, c)),
        enc_freq=np.ones((k, f)),
        h_activation=Activation.RELU,
    )
    x = rng.random((4, c * f)) + 0.1
    _, grads = loss_and_gradients(model, x)
    assert np.array_equal(grads["enc_channel"], np.zeros((k, c)))
    assert np.array_equal(grads["enc_freq"], np.zeros((k, f)))
