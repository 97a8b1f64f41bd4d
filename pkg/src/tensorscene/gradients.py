"""Reconstruction loss and its exact gradients through the autoencoder.

The loss is the Itakura-Saito divergence averaged over tensor elements, with
both the data and the reconstruction floored at a small epsilon before the
ratio (the divergence is singular at zero).  Backpropagation is written out
by hand; the finite-difference suite in the tests pins it down.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NumericalError
from .model import (
    _ACTIVATIONS,
    FactorModel,
    softplus,
    softplus_grad,
)
from .tensors import khatri_rao

__all__ = ["is_divergence", "loss_and_gradients"]


def is_divergence(x: np.ndarray, x_hat: np.ndarray, eps: float = 1e-8) -> float:
    """Mean Itakura-Saito divergence ``x/x_hat - log(x/x_hat) - 1``.

    Both arguments are floored at ``eps`` before forming the ratio.  Always
    >= 0, and 0 exactly when the floored arguments agree elementwise.
    """
    x = np.asarray(x, dtype=np.float64)
    x_hat = np.asarray(x_hat, dtype=np.float64)
    if x.shape != x_hat.shape:
        raise DimensionError(f"shape mismatch: {x.shape} vs {x_hat.shape}")
    if eps <= 0:
        raise ValueError("eps must be > 0")
    ratio = np.maximum(x, eps) / np.maximum(x_hat, eps)
    return float(np.mean(ratio - np.log(ratio) - 1.0))


@dataclass
class ForwardState:
    """Intermediate values of one forward pass, kept for reuse."""

    activations: np.ndarray  # (M, K) post-activation embedding
    pre_activations: np.ndarray  # (M, K) encoder output before sigma_H
    reconstruction: np.ndarray  # (M, C*F)
    loss: float


def _forward(model: FactorModel, x_batch: np.ndarray, eps: float) -> tuple[ForwardState, np.ndarray, np.ndarray, np.ndarray]:
    d_post = softplus(model.dec_channel)
    w_post = softplus(model.dec_freq)
    dec_basis = khatri_rao(d_post, w_post)  # (CF, K)
    enc_basis = khatri_rao(model.enc_channel.T, model.enc_freq.T)
    z = x_batch @ enc_basis
    act, _ = _ACTIVATIONS[model.h_activation]
    h = act(z)
    x_hat = h @ dec_basis.T
    loss = is_divergence(x_batch, x_hat, eps)
    return ForwardState(h, z, x_hat, loss), d_post, w_post, dec_basis


def loss_and_gradients(
    model: FactorModel, x_batch: np.ndarray, eps: float = 1e-8
) -> tuple[float, dict[str, np.ndarray]]:
    """Loss of ``decode(encode(x_batch))`` against ``x_batch`` and its gradients.

    Parameters
    ----------
    model : FactorModel
    x_batch : ndarray, shape (M, C*F)
        Flattened nonnegative frames.
    eps : float
        Floor applied inside the divergence ratio.

    Returns
    -------
    loss : float
    grads : dict
        Gradient array per parameter name, matching ``model.parameters()``.

    Raises
    ------
    NumericalError
        If any gradient entry comes out NaN/Inf (names the parameter).
    """
    x_batch = np.asarray(x_batch, dtype=np.float64)
    if x_batch.ndim != 2 or x_batch.shape[1] != model.n_channels * model.n_bins:
        raise DimensionError(
            f"expected {model.n_channels * model.n_bins} columns, got {x_batch.shape}"
        )
    c, f, k = model.n_channels, model.n_bins, model.k

    state, d_post, w_post, dec_basis = _forward(model, x_batch, eps)

    # dL/dx_hat of mean(xf/yf - log(xf/yf) - 1): zero where the floor is
    # active, else (yf - xf) / yf^2.
    xf = np.maximum(x_batch, eps)
    yf = np.maximum(state.reconstruction, eps)
    g_recon = np.where(state.reconstruction > eps, (yf - xf) / (yf * yf), 0.0)
    g_recon /= x_batch.size

    g_dec_basis = g_recon.T @ state.activations  # (CF, K)
    g_h = g_recon @ dec_basis  # (M, K)

    gg = g_dec_basis.reshape(c, f, k)
    g_d_post = np.einsum("cfk,fk->ck", gg, w_post)
    g_w_post = np.einsum("cfk,ck->fk", gg, d_post)
    grads = {
        "dec_channel": g_d_post * softplus_grad(model.dec_channel),
        "dec_freq": g_w_post * softplus_grad(model.dec_freq),
    }

    _, act_grad = _ACTIVATIONS[model.h_activation]
    g_z = g_h * act_grad(state.pre_activations)
    g_enc_basis = x_batch.T @ g_z  # (CF, K)
    ge = g_enc_basis.reshape(c, f, k)
    grads["enc_channel"] = np.einsum("cfk,kf->kc", ge, model.enc_freq)
    grads["enc_freq"] = np.einsum("cfk,kc->kf", ge, model.enc_channel)

    for name, g in grads.items():
        if not np.all(np.isfinite(g)):
            raise NumericalError(f"non-finite gradient for {name}")
    return state.loss, grads
