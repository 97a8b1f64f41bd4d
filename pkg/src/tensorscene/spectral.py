"""STFT analysis/synthesis and phase selection.

Analysis uses windowed real FFTs with a one-sided spectrum (bins
``0..fft_size/2``).  Synthesis is weighted overlap-add with the analysis
window reapplied and an explicit sum-of-squared-windows normalization, which
reconstructs interior samples exactly whenever the window/hop pair leaves no
coverage gaps.
"""

import numpy as np

from .audio import AudioClip
from .errors import ConfigurationError, DimensionError, InputError
from .tensors import SceneTensor

__all__ = ["stft", "istft", "loudest_channel_phase", "make_window"]

_COVERAGE_TINY = 1e-10


def make_window(kind: str, fft_size: int) -> np.ndarray:
    if kind == "hann":
        # periodic form, suited to overlap-add
        return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(fft_size) / fft_size)
    if kind == "rect":
        return np.ones(fft_size)
    raise ConfigurationError(f"unknown window {kind!r}")


def _ola_denominator(window: np.ndarray, hop: int, n_frames: int, length: int):
    denom = np.zeros(length)
    wsq = window**2
    for t in range(n_frames):
        denom[t * hop : t * hop + len(window)] += wsq
    return denom


def check_overlap_add(window: np.ndarray, hop: int) -> None:
    """Raise if overlap-added squared windows leave gaps (no reconstruction)."""
    n = len(window)
    if not 0 < hop <= n:
        raise ConfigurationError(f"hop {hop} must be in (0, fft_size={n}]")
    frames = 4 * (n // hop) + 4
    denom = _ola_denominator(window, hop, frames, (frames - 1) * hop + n)
    steady = denom[n : (frames - 1) * hop]
    if steady.size and steady.min() < 1e-6 * max(steady.max(), 1e-30):
        raise ConfigurationError(
            f"window/hop pair violates the overlap-add condition (hop={hop})"
        )


def stft(
    audio: AudioClip, fft_size: int = 1024, hop: int = 256, window: str = "hann"
) -> SceneTensor:
    """Magnitude/phase STFT of a multichannel clip.

    Frames are left-aligned (no centering padding); trailing samples that do
    not fill a frame are dropped.  ``F = fft_size // 2 + 1``.
    """
    if fft_size < 2 or fft_size & (fft_size - 1):
        raise ConfigurationError(f"fft_size {fft_size} is not a power of two")
    if not 0 < hop <= fft_size:
        raise ConfigurationError(f"hop {hop} must be in (0, fft_size]")
    n = audio.n_samples
    if n < fft_size:
        raise InputError(f"audio of {n} samples is shorter than one frame")
    win = make_window(window, fft_size)
    n_frames = 1 + (n - fft_size) // hop
    frames = np.lib.stride_tricks.sliding_window_view(
        audio.samples, fft_size, axis=1
    )[:, ::hop, :]  # (C, T, fft)
    spec = np.fft.rfft(frames * win, axis=2)  # (C, T, F)
    spec = np.transpose(spec, (0, 2, 1))  # (C, F, T)
    phases = np.angle(spec)
    phases = np.where(phases <= -np.pi, np.pi, phases)
    return SceneTensor(
        magnitudes=np.abs(spec),
        phases=phases,
        sample_rate=audio.sample_rate,
        fft_size=fft_size,
        hop=hop,
    )


def istft(
    magnitudes: np.ndarray,
    phases: np.ndarray,
    fft_size: int,
    hop: int,
    sample_rate: int,
    window: str = "hann",
    length: int | None = None,
) -> AudioClip:
    """Overlap-add synthesis from magnitudes and phases.

    Accepts ``(F, T)`` single-channel or ``(C, F, T)`` input.  Output length
    is ``(T - 1) * hop + fft_size``, trimmed or zero-padded to ``length``
    when given.
    """
    magnitudes = np.asarray(magnitudes, dtype=np.float64)
    phases = np.asarray(phases, dtype=np.float64)
    if magnitudes.shape != phases.shape:
        raise DimensionError("magnitudes and phases must share a shape")
    squeeze = magnitudes.ndim == 2
    if squeeze:
        magnitudes = magnitudes[None]
        phases = phases[None]
    if magnitudes.ndim != 3:
        raise DimensionError("expected (F, T) or (C, F, T)")
    c, f, t = magnitudes.shape
    if f != fft_size // 2 + 1:
        raise DimensionError(f"{f} bins inconsistent with fft_size {fft_size}")
    win = make_window(window, fft_size)
    check_overlap_add(win, hop)

    spec = magnitudes * np.exp(1j * phases)
    frames = np.fft.irfft(np.transpose(spec, (0, 2, 1)), n=fft_size, axis=2)
    frames *= win  # synthesis window

    out_len = (t - 1) * hop + fft_size
    out = np.zeros((c, out_len))
    for ti in range(t):
        out[:, ti * hop : ti * hop + fft_size] += frames[:, ti, :]
    denom = _ola_denominator(win, hop, t, out_len)
    keep = denom > _COVERAGE_TINY
    out[:, keep] /= denom[keep]
    out[:, ~keep] = 0.0

    if length is not None:
        if length <= out_len:
            out = out[:, :length]
        else:
            out = np.pad(out, ((0, 0), (0, length - out_len)))
    return AudioClip(out, sample_rate)


def loudest_channel_phase(
    scene: SceneTensor, source_mags: np.ndarray
) -> tuple[np.ndarray, int]:
    """Pick the channel where the source carries the most energy.

    Returns that channel's phase plane ``(F, T)`` from the observed scene and
    the chosen channel index.  Ties go to the lowest index.
    """
    source_mags = np.asarray(source_mags)
    if source_mags.shape != scene.magnitudes.shape:
        raise DimensionError(
            f"source magnitudes {source_mags.shape} do not match scene "
            f"{scene.magnitudes.shape}"
        )
    energies = np.sum(source_mags**2, axis=(1, 2))
    channel = int(np.argmax(energies))
    return scene.phases[channel].copy(), channel
