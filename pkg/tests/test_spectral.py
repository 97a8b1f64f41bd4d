import numpy as np
import pytest

from tensorscene.audio import AudioClip
from tensorscene.errors import ConfigurationError, InputError
from tensorscene.spectral import istft, loudest_channel_phase, make_window, stft
from tensorscene.tensors import SceneTensor

FS = 8000


def clip_of(x):
    return AudioClip(np.asarray(x), FS)


def test_dc_signal_concentrates_in_bin_zero():
    scene = stft(clip_of(np.ones(4096)), fft_size=256, hop=64)
    # windowed DFT of a constant: bin 0 carries sum(window); higher bins only
    # see window leakage, and the periodic hann spills solely into bin 1
    win = make_window("hann", 256)
    assert np.allclose(scene.magnitudes[0, 0, :], win.sum(), rtol=1e-10)
    assert np.max(scene.magnitudes[0, 3:, :]) < 1e-9 * win.sum()


def test_bin_centered_sinusoid_peaks_at_its_bin():
    k = 12
    fft, hop = 256, 64
    t = np.arange(4096) / FS
    x = np.sin(2 * np.pi * (k * FS / fft) * t)
    scene = stft(clip_of(x), fft_size=fft, hop=hop)
    peaks = np.argmax(scene.magnitudes[0], axis=0)
    assert np.all(peaks == k)


def test_zero_signal_gives_zero_magnitudes():
    scene = stft(clip_of(np.zeros(2048)), fft_size=256, hop=64)
    assert np.array_equal(scene.magnitudes, np.zeros_like(scene.magnitudes))


def test_stft_validations():
    with pytest.raises(ConfigurationError):
        stft(clip_of(np.ones(4096)), fft_size=300, hop=64)
    with pytest.raises(ConfigurationError):
        stft(clip_of(np.ones(4096)), fft_size=256, hop=0)
    with pytest.raises(InputError):
        stft(clip_of(np.ones(100)), fft_size=256, hop=64)


@pytest.mark.parametrize("window,hop", [("hann", 64), ("hann", 128), ("rect", 256)])
def test_roundtrip_interior_identity(rng, window, hop):
    fft = 256
    x = rng.standard_normal((2, 5000)) * 0.3
    scene = stft(AudioClip(x, FS), fft_size=fft, hop=hop, window=window)
    back = istft(
        scene.magnitudes, scene.phases, fft, hop, FS, window=window
    ).samples
    lo, hi = fft, back.shape[1] - fft
    err = np.linalg.norm(back[:, lo:hi] - x[:, lo:hi]) / np.linalg.norm(x[:, lo:hi])
    assert err < 1e-6


def test_istft_zero_magnitudes_silent():
    mags = np.zeros((129, 10))
    out = istft(mags, mags, 256, 64, FS)
    assert np.array_equal(out.samples, np.zeros_like(out.samples))


def test_istft_linearity(rng):
    x = rng.standard_normal(3000)
    scene = stft(clip_of(x), fft_size=256, hop=64)
    once = istft(scene.magnitudes, scene.phases, 256, 64, FS).samples
    twice = istft(2.0 * scene.magnitudes, scene.phases, 256, 64, FS).samples
    assert np.allclose(twice, 2.0 * once, atol=1e-12)


def test_istft_cola_violation_rejected():
    # hann with hop == fft_size leaves zero-coverage gaps
    mags = np.zeros((129, 4))
    with pytest.raises(ConfigurationError):
        istft(mags, mags, 256, 256, FS, window="hann")


def test_istft_length_trim_and_pad(rng):
    x = rng.standard_normal(3000)
    scene = stft(clip_of(x), fft_size=256, hop=64)
    exact = istft(scene.magnitudes, scene.phases, 256, 64, FS, length=3000)
    assert exact.n_samples == 3000
    longer = istft(scene.magnitudes, scene.phases, 256, 64, FS, length=4000)
    assert longer.n_samples == 4000
    assert np.array_equal(longer.samples[:, 3500:], np.zeros((1, 500)))


def test_parseval_per_frame(rng):
    # windowed-frame energy == full-spectrum energy / fft_size, with the
    # one-sided storage unfolded through conjugate symmetry
    fft, hop = 256, 64
    x = rng.standard_normal(2048)
    win = make_window("hann", fft)
    scene = stft(clip_of(x), fft_size=fft, hop=hop)
    for t in range(scene.n_frames):
        frame = x[t * hop : t * hop + fft] * win
        time_energy = np.sum(frame**2)
        m = scene.magnitudes[0, :, t]
        spec_energy = (m[0] ** 2 + 2 * np.sum(m[1:-1] ** 2) + m[-1] ** 2) / fft
        assert abs(time_energy - spec_energy) < 1e-9 * max(time_energy, 1.0)


def _scene_with_phases(rng, c, f, t):
    mags = rng.random((c, f, t))
    phases = rng.uniform(-3.0, 3.0, (c, f, t))
    return SceneTensor(mags, phases, FS, fft_size=2 * (f - 1), hop=4)


def test_loudest_channel_single_channel_source(rng):
    scene = _scene_with_phases(rng, 3, 5, 4)
    source = np.zeros((3, 5, 4))
    source[2] = 1.0
    phases, ch = loudest_channel_phase(scene, source)
    assert ch == 2
    assert np.array_equal(phases, scene.phases[2])


def test_loudest_channel_tie_breaks_low(rng):
    scene = _scene_with_phases(rng, 2, 5, 4)
    source = np.ones((2, 5, 4))
    _, ch = loudest_channel_phase(scene, source)
    assert ch == 0


def test_loudest_channel_energy_argmax(rng):
    scene = _scene_with_phases(rng, 3, 5, 4)
    source = np.zeros((3, 5, 4))
    # per-channel total energies 1.0, 4.0, 2.25
    source[0, 0, 0] = 1.0
    source[1, 0, 0] = 2.0
    source[2, 0, 0] = 1.5
    _, ch = loudest_channel_phase(scene, source)
    assert ch == 1
