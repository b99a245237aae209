"""Synthetic benchmarks mirroring the separation and enhancement tables.

Each function returns plain numbers so tests and ``scripts/`` can share them.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import metrics, synth
from .pipeline import (AnalysisConfig, enhance, enhance_ideal, ltss_from_waveforms,
                       oracle_prior, separate, separate_ideal)
from .priors import DegradationSettings
from .signal_io import DEFAULT_SAMPLE_RATE, Waveform, mix

METHODS = ("binary", "ratio")


def two_tone(duration: float = 2.0, sr: int = DEFAULT_SAMPLE_RATE,
             freqs=(440.0, 2000.0), amplitude: float = 0.5) -> tuple[Waveform, Waveform]:
    return tuple(synth.tone(f, duration, sr, amplitude) for f in freqs)


def bursty_band_noise(low: float, high: float, duration: float, rng: np.random.Generator,
                      burst_ms: float = 20.0, sr: int = DEFAULT_SAMPLE_RATE,
                      level: float = 0.1) -> Waveform:
    """Band-limited noise gated on/off in ``burst_ms`` segments with hard edges."""
    base = synth.band_noise(low, high, duration, rng, sr, 1.0).samples
    seg = int(burst_ms * sr / 1000)
    gates = (rng.random(len(base) // seg + 1) > 0.5).astype(float)
    env = np.maximum(np.repeat(gates, seg)[: len(base)], 0.03)
    return synth.with_rms(Waveform(base * env, sr), level)


def separation_mixtures(n: int, seed: int, duration: float = 2.0):
    """Pairs of bursty noise sources in overlapping one-octave bands."""
    rng = np.random.default_rng(seed)
    for _ in range(n):
        lo1 = np.exp(rng.uniform(np.log(200), np.log(2000)))
        lo2 = lo1 * rng.uniform(1.0, 1.5)
        yield (bursty_band_noise(lo1, 2 * lo1, duration, rng),
               bursty_band_noise(lo2, 2 * lo2, duration, rng))


@dataclass
class SeparationResult:
    mixture: list[float] = field(default_factory=list)
    prior: dict[str, list[float]] = field(default_factory=lambda: {m: [] for m in METHODS})
    ideal: dict[str, list[float]] = field(default_factory=lambda: {m: [] for m in METHODS})

    def means(self) -> dict[str, float]:
        out = {"mixture": float(np.mean(self.mixture))}
        for m in METHODS:
            out[f"prior-{m}"] = float(np.mean(self.prior[m]))
            out[f"ideal-{m}"] = float(np.mean(self.ideal[m]))
        return out


def separation_benchmark(n_mixtures: int = 24, seed: int = 0, noise_std: float = 0.5,
                         blur_frames: int = 3, cfg: AnalysisConfig | None = None) -> SeparationResult:
    result = SeparationResult()
    for i, (s1, s2) in enumerate(separation_mixtures(n_mixtures, seed)):
        m = mix(s1, s2)
        truths = [s1, s2]
        p1 = oracle_prior(s1, DegradationSettings(noise_std, blur_frames, 2 * i + 1000 * seed), cfg)
        p2 = oracle_prior(s2, DegradationSettings(noise_std, blur_frames, 2 * i + 1 + 1000 * seed), cfg)
        result.mixture.append(metrics.evaluate_pair([m, m], truths).mean_sdr)
        for method in METHODS:
            est = separate(m, p1, p2, method, cfg)
            result.prior[method].append(metrics.evaluate_pair(est, truths).mean_sdr)
            est = separate_ideal(m, s1, s2, method, cfg)
            result.ideal[method].append(metrics.evaluate_pair(est, truths).mean_sdr)
    return result


@dataclass
class EnhancementResult:
    input_snr: list[float] = field(default_factory=list)
    ltss_snr: list[float] = field(default_factory=list)
    ideal_snr: list[float] = field(default_factory=list)

    def means(self) -> dict[str, float]:
        return {"noisy": float(np.mean(self.input_snr)),
                "ltss": float(np.mean(self.ltss_snr)),
                "ideal": float(np.mean(self.ideal_snr))}


def enhancement_benchmark(n_clips: int = 10, n_training: int = 10, seed: int = 0,
                          percentile: float = 75.0, input_snr_db: float = 0.0,
                          noise_std: float = 0.5, blur_frames: int = 3,
                          duration: float = 2.0, cfg: AnalysisConfig | None = None) -> EnhancementResult:
    """Speech-like target plus a three-tone background at ``input_snr_db``."""
    rng = np.random.default_rng(seed)
    training = [synth.speech_like(duration, rng) for _ in range(n_training)]
    profile = ltss_from_waveforms(training, percentile, cfg)
    result = EnhancementResult()
    for i in range(n_clips):
        speech = synth.speech_like(duration, rng)
        tones = synth.tonal_background(rng.uniform(200, 4000, 3), duration, rng=rng)
        noisy = mix(speech, synth.scale_to_snr(speech, tones, input_snr_db))
        prior = oracle_prior(speech, DegradationSettings(noise_std, blur_frames, i + 1000 * seed), cfg)
        result.input_snr.append(metrics.snr(noisy, speech))
        result.ltss_snr.append(metrics.snr(enhance(noisy, prior, profile, cfg), speech))
        result.ideal_snr.append(metrics.snr(enhance_ideal(noisy, speech, cfg), speech))
    return result
