"""The factorization autoencoder: structured encoder/decoder over scene tensors.

The decoder reconstructs a flattened scene from per-frame activations using
the Khatri-Rao product of a channel dictionary ``(C, K)`` and a spectral
dictionary ``(F, K)``.  The encoder approximates the inverse map with its own
pair of matrices, again combined through a Khatri-Rao product, followed by a
nonnegative activation so that activations stay >= 0.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import expit

from .errors import DimensionError, InputError
from .tensors import khatri_rao

__all__ = [
    "Activation",
    "softplus",
    "softplus_grad",
    "relu",
    "relu_grad",
    "FactorModel",
    "init_factor_model",
    "encode",
    "decode",
    "encoder_basis",
    "decoder_basis",
]


class Activation(str, Enum):
    """Nonnegative activation applied to the encoder output."""

    SOFTPLUS = "softplus"
    RELU = "relu"


def softplus(z: np.ndarray) -> np.ndarray:
    # log(1 + exp(z)), overflow-safe for large |z|
    return np.logaddexp(0.0, z)


def softplus_grad(z: np.ndarray) -> np.ndarray:
    return expit(z)


def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def relu_grad(z: np.ndarray) -> np.ndarray:
    return (z > 0).astype(np.float64)


_ACTIVATIONS = {
    Activation.SOFTPLUS: (softplus, softplus_grad),
    Activation.RELU: (relu, relu_grad),
}


@dataclass
class FactorModel:
    """Trainable matrices of the factorization autoencoder.

    ``dec_channel``/``dec_freq`` are stored pre-activation; the nonnegative
    dictionaries actually used by the decoder are their softplus images.
    The encoder matrices are unconstrained.  ``h_activation`` selects the
    nonlinearity applied to the encoder output (softplus keeps everything
    smooth; relu is available and can gate components off exactly).
    """

    dec_channel: np.ndarray  # (C, K), pre-activation channel dictionary
    dec_freq: np.ndarray  # (F, K), pre-activation spectral dictionary
    enc_channel: np.ndarray  # (K, C)
    enc_freq: np.ndarray  # (K, F)
    h_activation: Activation = Activation.SOFTPLUS

    def __post_init__(self) -> None:
        self.dec_channel = np.asarray(self.dec_channel, dtype=np.float64)
        self.dec_freq = np.asarray(self.dec_freq, dtype=np.float64)
        self.enc_channel = np.asarray(self.enc_channel, dtype=np.float64)
        self.enc_freq = np.asarray(self.enc_freq, dtype=np.float64)
        self.h_activation = Activation(self.h_activation)
        c, k = self.dec_channel.shape
        f, k2 = self.dec_freq.shape
        if k2 != k or self.enc_channel.shape != (k, c) or self.enc_freq.shape != (k, f):
            raise DimensionError("factor matrices disagree on C, F or K")
        if k < 1:
            raise InputError("component count must be >= 1")
        for name, arr in self.parameters().items():
            if not np.all(np.isfinite(arr)):
                raise InputError(f"non-finite entries in {name}")

    @property
    def n_channels(self) -> int:
        return self.dec_channel.shape[0]

    @property
    def n_bins(self) -> int:
        return self.dec_freq.shape[0]

    @property
    def k(self) -> int:
        return self.dec_channel.shape[1]

    def parameters(self) -> dict[str, np.ndarray]:
        """All trainable matrices, keyed by name."""
        return {
            "dec_channel": self.dec_channel,
            "dec_freq": self.dec_freq,
            "enc_channel": self.enc_channel,
            "enc_freq": self.enc_freq,
        }

    def channel_dictionary(self) -> np.ndarray:
        """Post-activation channel dictionary, shape (C, K), entries >= 0."""
        return softplus(self.dec_channel)

    def freq_dictionary(self) -> np.ndarray:
        """Post-activation spectral dictionary, shape (F, K), entries >= 0."""
        return softplus(self.dec_freq)


def init_factor_model(
    n_channels: int,
    n_bins: int,
    k: int,
    rng: np.random.Generator,
    h_activation: Activation = Activation.SOFTPLUS,
) -> FactorModel:
    """Draw all four matrices i.i.d. uniform over [0, 0.1).

    Keeps the post-softplus dictionaries close to log(2) and leaves no dead
    relu units at the start of training.
    """
    return FactorModel(
        dec_channel=rng.uniform(0.0, 0.1, size=(n_channels, k)),
        dec_freq=rng.uniform(0.0, 0.1, size=(n_bins, k)),
        enc_channel=rng.uniform(0.0, 0.1, size=(k, n_channels)),
        enc_freq=rng.uniform(0.0, 0.1, size=(k, n_bins)),
        h_activation=h_activation,
    )


def encoder_basis(model: FactorModel) -> np.ndarray:
    """Khatri-Rao combination of the encoder matrices, shape (C*F, K)."""
    return khatri_rao(model.enc_channel.T, model.enc_freq.T)


def decoder_basis(model: FactorModel) -> np.ndarray:
    """Khatri-Rao combination of the nonnegative dictionaries, shape (C*F, K)."""
    return khatri_rao(model.channel_dictionary(), model.freq_dictionary())


def encode(model: FactorModel, x_flat: np.ndarray) -> np.ndarray:
    """Map flattened frames ``(M, C*F)`` to nonnegative activations ``(M, K)``."""
    x_flat = np.asarray(x_flat, dtype=np.float64)
    if x_flat.ndim != 2 or x_flat.shape[1] != model.n_channels * model.n_bins:
        raise DimensionError(
            f"expected {model.n_channels * model.n_bins} columns, got {x_flat.shape}"
        )
    act, _ = _ACTIVATIONS[model.h_activation]
    return act(x_flat @ encoder_basis(model))


def decode(model: FactorModel, activations: np.ndarray) -> np.ndarray:
    """Reconstruct flattened frames ``(M, C*F)`` from activations ``(M, K)``.

    Nonnegative whenever the activations are (product of nonnegatives).
    """
    activations = np.asarray(activations, dtype=np.float64)
    if activations.ndim != 2 or activations.shape[1] != model.k:
        raise DimensionError(
            f"expected {model.k} activation columns, got {activations.shape}"
        )
    return activations @ decoder_basis(model).T
