"""Adam optimizer over the model's parameter dict."""

from dataclasses import dataclass, field

import numpy as np

from .model import FactorModel

__all__ = ["AdamState", "adam_step"]


@dataclass
class AdamState:
    """First/second moment estimates plus the step counter."""

    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def for_model(cls, model: FactorModel, **kwargs) -> "AdamState":
        zeros = {name: np.zeros_like(p) for name, p in model.parameters().items()}
        return cls(m=zeros, v={k: v.copy() for k, v in zeros.items()}, **kwargs)


def adam_step(
    model: FactorModel,
    grads: dict[str, np.ndarray],
    state: AdamState,
    lr: float,
) -> None:
    """One bias-corrected Adam update, applied to the model in place."""
    state.step += 1
    t = state.step
    b1, b2 = state.beta1, state.beta2
    for name, param in model.parameters().items():
        g = grads[name]
        state.m[name] = b1 * state.m[name] + (1.0 - b1) * g
        state.v[name] = b2 * state.v[name] + (1.0 - b2) * g * g
        m_hat = state.m[name] / (1.0 - b1**t)
        v_hat = state.v[name] / (1.0 - b2**t)
        param -= lr * m_hat / (np.sqrt(v_hat) + state.eps)
