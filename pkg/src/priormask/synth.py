"""Synthetic test signals for the benchmarks.

All generators take an explicit ``numpy.random.Generator`` (or a seed) so
every benchmark run is reproducible.
"""
from __future__ import annotations

import numpy as np

from .signal_io import DEFAULT_SAMPLE_RATE, Waveform


def _n(duration: float, sr: int) -> int:
    return int(round(duration * sr))


def tone(freq: float, duration: float = 2.0, sr: int = DEFAULT_SAMPLE_RATE,
         amplitude: float = 0.5, phase: float = 0.0) -> Waveform:
    t = np.arange(_n(duration, sr)) / sr
    return Waveform(amplitude * np.sin(2 * np.pi * freq * t + phase), sr)


def rms(x) -> float:
    x = np.asarray(getattr(x, "samples", x))
    return float(np.sqrt(np.mean(x ** 2)))


def with_rms(w: Waveform, level: float) -> Waveform:
    return Waveform(w.samples * (level / rms(w)), w.sample_rate)


def band_noise(low: float, high: float, duration: float, rng: np.random.Generator,
               sr: int = DEFAULT_SAMPLE_RATE, level: float = 0.1) -> Waveform:
    """White noise brick-wall filtered to [low, high] Hz, scaled to ``level`` RMS."""
    n = _n(duration, sr)
    spec = np.fft.rfft(rng.standard_normal(n))
    freqs = np.fft.rfftfreq(n, 1 / sr)
    spec[(freqs < low) | (freqs > high)] = 0
    return with_rms(Waveform(np.fft.irfft(spec, n), sr), level)


def smooth_envelope(n: int, rng: np.random.Generator, sr: int, rate: float = 4.0,
                    floor: float = 0.0) -> np.ndarray:
    """Random on/off gain held for 1/``rate`` s per segment, edges smoothed over ~20 ms."""
    seg = max(1, int(sr / rate))
    gates = (rng.random(n // seg + 1) > 0.4).astype(float)
    env = np.repeat(gates, seg)[:n]
    k = max(1, int(0.02 * sr))
    kernel = np.hanning(2 * k + 1)
    env = np.convolve(env, kernel / kernel.sum(), mode="same")
    return floor + (1 - floor) * env


def modulated_band_noise(low: float, high: float, duration: float, rng: np.random.Generator,
                         sr: int = DEFAULT_SAMPLE_RATE, level: float = 0.1,
                         rate: float = 4.0) -> Waveform:
    base = band_noise(low, high, duration, rng, sr, 1.0)
    env = smooth_envelope(len(base), rng, sr, rate, floor=0.05)
    return with_rms(Waveform(base.samples * env, sr), level)


FORMANTS = ((500.0, 80.0), (1500.0, 120.0), (2500.0, 160.0))


def speech_like(duration: float, rng: np.random.Generator, sr: int = DEFAULT_SAMPLE_RATE,
                f0: float = 120.0, level: float = 0.1,
                formants=FORMANTS, syllable_rate: float = 4.0) -> Waveform:
    """Voiced harmonic source with formant shaping and syllabic gating.

    Pitch wanders +/-15% around ``f0``; harmonic amplitudes follow a sum of
    resonance peaks over a -6 dB/octave tilt; a random on/off envelope
    inserts pauses the way running speech does.
    """
    n = _n(duration, sr)
    t = np.arange(n) / sr
    drift = np.interp(t, np.linspace(0, duration, 8), 1 + 0.15 * rng.uniform(-1, 1, 8))
    inst_f0 = f0 * drift
    phase = 2 * np.pi * np.cumsum(inst_f0) / sr
    out = np.zeros(n)
    for k in range(1, int((sr / 2) / (f0 * 1.15))):
        fk = k * inst_f0
        gain = 1.0 / k
        gain = gain * (0.05 + sum(np.exp(-0.5 * ((fk - fc) / bw) ** 2) for fc, bw in formants))
        gain = np.where(fk < sr / 2, gain, 0.0)
        out += gain * np.sin(k * phase + rng.uniform(0, 2 * np.pi))
    out *= smooth_envelope(n, rng, sr, syllable_rate)
    return with_rms(Waveform(out, sr), level)


def tonal_background(freqs, duration: float, sr: int = DEFAULT_SAMPLE_RATE,
                     level: float = 0.1, rng: np.random.Generator | None = None) -> Waveform:
    rng = rng or np.random.default_rng(0)
    n = _n(duration, sr)
    t = np.arange(n) / sr
    out = sum(np.sin(2 * np.pi * f * t + rng.uniform(0, 2 * np.pi)) for f in freqs)
    return with_rms(Waveform(out, sr), level)


def scale_to_snr(speech: Waveform, noise: Waveform, snr_db: float) -> Waveform:
    """Rescale ``noise`` so that speech-to-noise energy ratio equals ``snr_db``."""
    target = rms(speech) / (10 ** (snr_db / 20))
    return with_rms(noise, target)
