"""Time-domain audio container and WAV (RIFF) I/O.

Clips are float64 internally, shaped ``(channels, samples)`` with values
nominally in [-1, 1].  Files can be written as 32-bit float (bit-exact
round-trip) or 16-bit PCM, as one multichannel file or one mono file per
channel.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .errors import InputError

__all__ = ["AudioClip", "read_wav", "write_wav"]


@dataclass
class AudioClip:
    samples: np.ndarray  # (C, N)
    sample_rate: int

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.shape[1] < 1:
            raise InputError("samples must be (channels, n) with n >= 1")
        if not np.all(np.isfinite(arr)):
            raise InputError("samples contain NaN or Inf")
        self.samples = arr

    @property
    def n_channels(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        return self.n_samples / self.sample_rate

    def channel(self, c: int) -> np.ndarray:
        return self.samples[c]

    def rms(self) -> float:
        return float(np.sqrt(np.mean(self.samples**2)))


def read_wav(path: str | Path) -> AudioClip:
    """Read a WAV file into a float64 clip; integer PCM is scaled to [-1, 1)."""
    try:
        rate, data = wavfile.read(str(path))
    except FileNotFoundError:
        raise
    except Exception as exc:  # malformed RIFF etc.
        raise InputError(f"{path}: cannot read WAV ({exc})") from exc
    if data.ndim == 1:
        data = data[:, None]
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.int32:
        samples = data.astype(np.float64) / 2147483648.0
    elif data.dtype == np.uint8:
        samples = (data.astype(np.float64) - 128.0) / 128.0
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise InputError(f"{path}: unsupported WAV sample format {data.dtype}")
    return AudioClip(samples.T, int(rate))


def write_wav(
    path: str | Path, clip: AudioClip, sample_format: str = "float32"
) -> None:
    """Write a clip as ``float32`` (default) or ``pcm16``.

    Multichannel clips become one interleaved multichannel file.
    """
    data = clip.samples.T  # (N, C)
    if data.shape[1] == 1:
        data = data[:, 0]
    if sample_format == "float32":
        wavfile.write(str(path), clip.sample_rate, data.astype(np.float32))
    elif sample_format == "pcm16":
        clipped = np.clip(data, -1.0, 32767.0 / 32768.0)
        wavfile.write(
            str(path), clip.sample_rate, np.round(clipped * 32768.0).astype(np.int16)
        )
    else:
        raise InputError(f"unsupported sample format {sample_format!r}")
