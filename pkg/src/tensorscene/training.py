"""Stochastic minibatch training of the factorization autoencoder."""

import csv
import logging
from pathlib import Path

import numpy as np
from pydantic import BaseModel, Field

from .errors import ConfigurationError, NumericalError
from .gradients import loss_and_gradients
from .model import Activation, FactorModel, init_factor_model
from .optim import AdamState, adam_step
from .tensors import SceneTensor

__all__ = ["TrainConfig", "sample_minibatch", "train", "write_loss_csv"]

log = logging.getLogger(__name__)


class TrainConfig(BaseModel):
    """Hyperparameters of one training run."""

    batch_frames: int = Field(default=15, ge=1)
    n_batches: int = Field(default=3000, ge=1)
    learning_rate: float = Field(default=1e-2, gt=0)
    k: int = Field(default=100, ge=1)
    epsilon_floor: float = Field(default=1e-8, gt=0)
    seed: int = 0
    h_activation: Activation = Activation.SOFTPLUS


def sample_minibatch(
    scene: SceneTensor, m: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``m`` distinct frames uniformly at random, flattened to ``(m, C*F)``.

    Frames are sampled without replacement within a batch; successive calls
    redraw independently.  Column layout follows :func:`tensors.flatten_frames`.
    """
    t = scene.n_frames
    if not 1 <= m <= t:
        raise ConfigurationError(f"batch of {m} frames from a {t}-frame scene")
    idx = rng.choice(t, size=m, replace=False)
    c, f = scene.n_channels, scene.n_bins
    return np.transpose(scene.magnitudes[:, :, idx], (2, 0, 1)).reshape(m, c * f)


def train(
    scene: SceneTensor, cfg: TrainConfig
) -> tuple[FactorModel, np.ndarray]:
    """Train a fresh model on the scene; returns it with the per-batch loss trace.

    Deterministic given ``cfg.seed``: initialization and frame sampling share a
    single generator seeded from it.
    """
    if cfg.batch_frames > scene.n_frames:
        raise ConfigurationError(
            f"batch_frames={cfg.batch_frames} exceeds scene frames={scene.n_frames}"
        )
    rng = np.random.default_rng(cfg.seed)
    model = init_factor_model(
        scene.n_channels, scene.n_bins, cfg.k, rng, cfg.h_activation
    )
    state = AdamState.for_model(model)
    losses = np.empty(cfg.n_batches, dtype=np.float64)
    for i in range(cfg.n_batches):
        batch = sample_minibatch(scene, cfg.batch_frames, rng)
        loss, grads = loss_and_gradients(model, batch, cfg.epsilon_floor)
        if not np.isfinite(loss):
            raise NumericalError(f"loss diverged (NaN/Inf) at batch {i}")
        adam_step(model, grads, state, cfg.learning_rate)
        losses[i] = loss
        if i % 500 == 0:
            log.debug("batch %d loss %.6g", i, loss)
    return model, losses


def write_loss_csv(path: str | Path, losses: np.ndarray) -> None:
    """Export a loss trace as ``batch,loss`` rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["batch", "loss"])
        for i, value in enumerate(losses):
            writer.writerow([i, repr(float(value))])
