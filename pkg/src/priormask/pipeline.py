"""End-to-end separation and enhancement.

Signals are zero-padded by ``window_length - hop_length`` samples on each side
(plus enough at the end to complete the last hop) before analysis, so every
original sample lies in the fully overlapped region of the STFT and the
output can be trimmed back to the input length. Priors supplied from files
must be computed with the same framing; :func:`prior_shape` gives the shape.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError
from .masks import Mask, apply_mask, ideal_masks, separation_masks, threshold_mask
from .priors import DegradationSettings, LtssProfile, compute_ltss, synth_prior
from .signal_io import Waveform
from .spectral import (ComplexSpectrogram, MelFilterbank, MelSpectrogram, StftConfig,
                       apply_linear_mask, expand_mask, istft, mel_filterbank, mel_project, stft)


@dataclass(frozen=True)
class AnalysisConfig:
    stft: StftConfig = field(default_factory=StftConfig)
    mel_bins: int = 80
    f_min: float = 0.0
    f_max: float | None = None

    def filterbank(self, sample_rate: int) -> MelFilterbank:
        return mel_filterbank(sample_rate, self.stft.fft_size, self.mel_bins,
                              self.f_min, self.f_max)


@dataclass(frozen=True, eq=False)
class Analysis:
    spec: ComplexSpectrogram
    mel: MelSpectrogram
    n_samples: int
    offset: int

    @property
    def filterbank(self) -> MelFilterbank:
        return self.mel.filterbank


def edge_padding(n_samples: int, cfg: StftConfig) -> tuple[int, int]:
    margin = cfg.window_length - cfg.hop_length
    padded = n_samples + 2 * margin
    extra = (-(padded - cfg.window_length)) % cfg.hop_length
    return margin, margin + extra


def prior_shape(n_samples: int, cfg: AnalysisConfig) -> tuple[int, int]:
    left, right = edge_padding(n_samples, cfg.stft)
    return cfg.stft.n_frames(n_samples + left + right), cfg.mel_bins


def analyse(w: Waveform, cfg: AnalysisConfig | None = None) -> Analysis:
    cfg = cfg or AnalysisConfig()
    left, right = edge_padding(len(w), cfg.stft)
    padded = Waveform(np.pad(w.samples, (left, right)), w.sample_rate)
    spec = stft(padded, cfg.stft)
    mel = mel_project(spec, cfg.filterbank(w.sample_rate))
    return Analysis(spec, mel, len(w), left)


def resynthesise(analysis: Analysis, linear_mask) -> Waveform:
    out = istft(apply_linear_mask(analysis.spec, linear_mask))
    start = analysis.offset
    return Waveform(out.samples[start:start + analysis.n_samples], out.sample_rate)


def filter_with_mask(analysis: Analysis, mask: Mask) -> Waveform:
    """Apply a mel-domain mask to the analysed signal and return audio."""
    apply_mask(analysis.mel, mask)  # validates shape
    return resynthesise(analysis, expand_mask(mask, analysis.filterbank))


def _check_prior(prior: MelSpectrogram, analysis: Analysis, label: str) -> None:
    if prior.shape != analysis.mel.shape:
        raise ShapeError(
            f"{label} has shape {prior.shape}, mixture analysis is {analysis.mel.shape}")


def separate(mixture: Waveform, prior1: MelSpectrogram, prior2: MelSpectrogram,
             method: str = "ratio", cfg: AnalysisConfig | None = None) -> tuple[Waveform, Waveform]:
    analysis = analyse(mixture, cfg)
    _check_prior(prior1, analysis, "prior 1")
    _check_prior(prior2, analysis, "prior 2")
    f1, f2 = separation_masks(prior1, prior2, method)
    return filter_with_mask(analysis, f1), filter_with_mask(analysis, f2)


def separate_ideal(mixture: Waveform, truth1: Waveform, truth2: Waveform, kind: str = "binary",
                   cfg: AnalysisConfig | None = None) -> tuple[Waveform, Waveform]:
    analysis = analyse(mixture, cfg)
    f1, f2 = ideal_masks(analyse(truth1, cfg).mel, analyse(truth2, cfg).mel, kind)
    return filter_with_mask(analysis, f1), filter_with_mask(analysis, f2)


def enhance(noisy: Waveform, prior: MelSpectrogram, profile: LtssProfile,
            cfg: AnalysisConfig | None = None) -> Waveform:
    analysis = analyse(noisy, cfg)
    _check_prior(prior, analysis, "prior")
    return filter_with_mask(analysis, threshold_mask(prior, profile))


def enhance_ideal(noisy: Waveform, clean: Waveform, cfg: AnalysisConfig | None = None) -> Waveform:
    """Ideal binary mask: keep bins where clean speech outweighs the residual noise."""
    if len(noisy) != len(clean):
        raise ShapeError(f"noisy has {len(noisy)} samples, clean has {len(clean)}")
    analysis = analyse(noisy, cfg)
    noise = Waveform(noisy.samples - clean.samples, noisy.sample_rate)
    speech_mask, _ = ideal_masks(analyse(clean, cfg).mel, analyse(noise, cfg).mel, "binary")
    return filter_with_mask(analysis, speech_mask)


def oracle_prior(truth: Waveform, degradation: DegradationSettings,
                 cfg: AnalysisConfig | None = None) -> MelSpectrogram:
    return synth_prior(analyse(truth, cfg).mel, degradation)


def ltss_from_waveforms(clips, percentile: float, cfg: AnalysisConfig | None = None) -> LtssProfile:
    return compute_ltss([analyse(c, cfg).mel for c in clips], percentile)
