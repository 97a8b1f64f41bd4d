"""Model checkpoints: a single self-describing JSON file.

Layout (version 1)::

    {
      "format": "tensorscene-checkpoint",
      "version": 1,
      "h_activation": "softplus",
      "train_config": { ... TrainConfig fields ... },
      "stft": {"fft_size": 1024, "hop": 256, "sample_rate": 16000},
      "matrices": {
        "<name>": {"shape": [r, c], "dtype": "float64", "data": "<base64>"}
      }
    }

Matrix bytes are row-major 64-bit floats, base64-encoded.  The ``stft``
block records how the scene tensor the model was trained on was produced,
so separation can rebuild a consistent tensor from the same audio.
"""

import base64
import json
from pathlib import Path

import numpy as np

from .errors import InputError
from .model import Activation, FactorModel
from .training import TrainConfig

__all__ = ["save_checkpoint", "load_checkpoint"]

FORMAT_NAME = "tensorscene-checkpoint"


def _encode_matrix(arr: np.ndarray) -> dict:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    return {
        "shape": list(arr.shape),
        "dtype": "float64",
        "data": base64.b64encode(arr.tobytes()).decode("ascii"),
    }


def _decode_matrix(entry: dict) -> np.ndarray:
    if entry.get("dtype") != "float64":
        raise InputError(f"unsupported matrix dtype {entry.get('dtype')!r}")
    raw = base64.b64decode(entry["data"])
    return np.frombuffer(raw, dtype=np.float64).reshape(entry["shape"]).copy()


def save_checkpoint(
    path: str | Path,
    model: FactorModel,
    train_config: TrainConfig,
    stft_params: dict | None = None,
) -> None:
    doc = {
        "format": FORMAT_NAME,
        "version": 1,
        "h_activation": model.h_activation.value,
        "train_config": train_config.model_dump(mode="json"),
        "stft": stft_params or {},
        "matrices": {
            name: _encode_matrix(arr) for name, arr in model.parameters().items()
        },
    }
    Path(path).write_text(json.dumps(doc, indent=2))


def load_checkpoint(path: str | Path) -> tuple[FactorModel, TrainConfig, dict]:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != FORMAT_NAME or doc.get("version") != 1:
        raise InputError(f"{path}: not a version-1 {FORMAT_NAME} file")
    matrices = {name: _decode_matrix(e) for name, e in doc["matrices"].items()}
    model = FactorModel(
        dec_channel=matrices["dec_channel"],
        dec_freq=matrices["dec_freq"],
        enc_channel=matrices["enc_channel"],
        enc_freq=matrices["enc_freq"],
        h_activation=Activation(doc["h_activation"]),
    )
    return model, TrainConfig(**doc["train_config"]), doc.get("stft", {})
