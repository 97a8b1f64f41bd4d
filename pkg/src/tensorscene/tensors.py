"""Scene tensors and the Khatri-Rao algebra used to matricize them.

A scene is a nonnegative magnitude spectrogram tensor of shape
``(channels, bins, frames)`` plus the complex phases that were stripped
off when taking magnitudes.  The factorization code works on a flattened
view with one row per frame and column index ``c * n_bins + f``; that
ordering is the single convention used everywhere (it matches the row
ordering of :func:`khatri_rao` applied to channel-major factors).
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InputError

__all__ = [
    "SceneTensor",
    "khatri_rao",
    "flatten_frames",
    "unflatten_frames",
]


def khatri_rao(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Column-wise Kronecker product of two matrices.

    Parameters
    ----------
    a : ndarray, shape (P, K)
    b : ndarray, shape (Q, K)

    Returns
    -------
    ndarray, shape (P*Q, K)
        Column k is ``kron(a[:, k], b[:, k])``; row ``p * Q + q`` holds
        ``a[p, k] * b[q, k]``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionError("khatri_rao expects two matrices")
    if a.shape[1] != b.shape[1]:
        raise DimensionError(
            f"column count mismatch: {a.shape[1]} vs {b.shape[1]}"
        )
    p, k = a.shape
    q = b.shape[0]
    return (a[:, None, :] * b[None, :, :]).reshape(p * q, k)


def flatten_frames(magnitudes: np.ndarray) -> np.ndarray:
    """Flatten a ``(C, F, T)`` tensor into the ``(T, C*F)`` frame-major matrix.

    Column index is ``c * F + f``, consistent with ``khatri_rao(channel_factor,
    freq_factor)`` row ordering.
    """
    if magnitudes.ndim != 3:
        raise DimensionError("expected a (channels, bins, frames) tensor")
    c, f, t = magnitudes.shape
    return np.transpose(magnitudes, (2, 0, 1)).reshape(t, c * f)


def unflatten_frames(x: np.ndarray, n_channels: int, n_bins: int) -> np.ndarray:
    """Inverse of :func:`flatten_frames`: ``(T, C*F)`` back to ``(C, F, T)``."""
    if x.ndim != 2 or x.shape[1] != n_channels * n_bins:
        raise DimensionError(
            f"cannot unflatten shape {x.shape} into {n_channels}x{n_bins} frames"
        )
    t = x.shape[0]
    return np.transpose(x.reshape(t, n_channels, n_bins), (1, 2, 0))


@dataclass
class SceneTensor:
    """Magnitude STFT tensor of a multichannel recording plus its phases.

    Attributes
    ----------
    magnitudes : ndarray, shape (C, F, T)
        Nonnegative spectral magnitudes, channels x bins x frames.
    phases : ndarray, shape (C, F, T)
        Phase angles in radians, each in ``(-pi, pi]``.
    sample_rate : int
    fft_size, hop : int
        Analysis parameters; ``F == fft_size // 2 + 1``.
    """

    magnitudes: np.ndarray
    phases: np.ndarray
    sample_rate: int
    fft_size: int
    hop: int

    def __post_init__(self) -> None:
        self.magnitudes = np.asarray(self.magnitudes, dtype=np.float64)
        self.phases = np.asarray(self.phases, dtype=np.float64)
        if self.magnitudes.ndim != 3:
            raise DimensionError("magnitudes must have shape (C, F, T)")
        if self.magnitudes.shape != self.phases.shape:
            raise DimensionError("magnitudes and phases must share a shape")
        c, f, t = self.magnitudes.shape
        if c < 1 or t < 1:
            raise InputError("scene needs at least one channel and one frame")
        if f != self.fft_size // 2 + 1:
            raise DimensionError(
                f"bin count {f} inconsistent with fft_size {self.fft_size}"
            )
        if not np.all(np.isfinite(self.magnitudes)):
            raise InputError("magnitudes contain NaN or Inf")
        if np.any(self.magnitudes < 0):
            raise InputError("magnitudes must be nonnegative")
        if not np.all(np.isfinite(self.phases)):
            raise InputError("phases contain NaN or Inf")

    @property
    def n_channels(self) -> int:
        return self.magnitudes.shape[0]

    @property
    def n_bins(self) -> int:
        return self.magnitudes.shape[1]

    @property
    def n_frames(self) -> int:
        return self.magnitudes.shape[2]

    def flattened(self) -> np.ndarray:
        """All frames as a ``(T, C*F)`` matrix."""
        return flatten_frames(self.magnitudes)

    def complex_stft(self) -> np.ndarray:
        """Recombine magnitudes and phases into the complex STFT tensor."""
        return self.magnitudes * np.exp(1j * self.phases)
