"""STFT analysis/synthesis, mel projection and phase-preserving masking."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ShapeError
from .signal_io import Waveform

WINDOWS = ("hann",)

# Synthesis normalisation floor, relative to the interior window-power sum.
# Keeps edge samples (covered only by window tails) from being amplified.
_NORM_FLOOR = 0.1


@dataclass(frozen=True)
class StftConfig:
    window_length: int = 640
    hop_length: int = 160
    fft_size: int = 1024
    window: str = "hann"

    def __post_init__(self):
        if self.window not in WINDOWS:
            raise ContractError(f"unknown window {self.window!r}; choose from {WINDOWS}")
        if not 0 < self.hop_length <= self.window_length <= self.fft_size:
            raise ContractError(
                "need 0 < hop_length <= window_length <= fft_size, got "
                f"{self.hop_length}, {self.window_length}, {self.fft_size}")

    @property
    def overlap_ratio(self) -> float:
        return self.window_length / self.hop_length

    @property
    def is_cola(self) -> bool:
        return self.window_length % self.hop_length == 0 and self.overlap_ratio >= 2

    @property
    def n_bins(self) -> int:
        return self.fft_size // 2 + 1

    def window_array(self) -> np.ndarray:
        # periodic Hann: sums to a constant under integer overlap
        n = np.arange(self.window_length)
        return 0.5 - 0.5 * np.cos(2 * np.pi * n / self.window_length)

    def n_frames(self, n_samples: int) -> int:
        return 1 + (n_samples - self.window_length) // self.hop_length

    def coverage(self, n_frames: int) -> int:
        return (n_frames - 1) * self.hop_length + self.window_length

    def interior(self, n_samples: int) -> slice:
        """Samples covered by the full overlap of windows."""
        margin = self.window_length - self.hop_length
        return slice(margin, max(margin, n_samples - margin))


@dataclass(frozen=True, eq=False)
class ComplexSpectrogram:
    magnitudes: np.ndarray  # frames x bins
    phases: np.ndarray
    config: StftConfig
    sample_rate: int

    def __post_init__(self):
        if self.magnitudes.shape != self.phases.shape:
            raise ShapeError(
                f"magnitude shape {self.magnitudes.shape} != phase shape {self.phases.shape}")
        if self.magnitudes.ndim != 2 or self.magnitudes.shape[1] != self.config.n_bins:
            raise ShapeError(
                f"expected frames x {self.config.n_bins} bins, got {self.magnitudes.shape}")
        if np.any(self.magnitudes < 0):
            raise ContractError("magnitudes must be nonnegative")

    @property
    def shape(self) -> tuple[int, int]:
        return self.magnitudes.shape

    @property
    def n_frames(self) -> int:
        return self.magnitudes.shape[0]

    def complex(self) -> np.ndarray:
        return self.magnitudes * np.exp(1j * self.phases)


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


@dataclass(frozen=True, eq=False)
class MelFilterbank:
    weights: np.ndarray  # mel_bins x linear bins
    f_min: float
    f_max: float
    sample_rate: int
    fft_size: int

    @property
    def mel_bins(self) -> int:
        return self.weights.shape[0]

    @property
    def n_linear(self) -> int:
        return self.weights.shape[1]

    def same_as(self, other: "MelFilterbank") -> bool:
        return (self.weights.shape == other.weights.shape
                and self.sample_rate == other.sample_rate
                and self.fft_size == other.fft_size
                and np.isclose(self.f_min, other.f_min)
                and np.isclose(self.f_max, other.f_max))


def mel_filterbank(sample_rate: int, fft_size: int, mel_bins: int = 80,
                   f_min: float = 0.0, f_max: float | None = None) -> MelFilterbank:
    """HTK-mel triangular filters with unit peak.

    The outer filter edges sit half a bin beyond ``f_min`` and ``f_max`` so the
    bins at both band limits (DC and Nyquist by default) carry weight; bins
    outside the band get none.
    """
    if f_max is None:
        f_max = sample_rate / 2
    if not 0 <= f_min < f_max <= sample_rate / 2:
        raise ContractError(f"need 0 <= f_min < f_max <= Nyquist, got {f_min}, {f_max}")
    if mel_bins < 1:
        raise ContractError("mel_bins must be >= 1")
    half_bin = 0.5 * sample_rate / fft_size
    edges = mel_to_hz(np.linspace(hz_to_mel(f_min - half_bin), hz_to_mel(f_max + half_bin),
                                  mel_bins + 2))
    freqs = np.arange(fft_size // 2 + 1) * sample_rate / fft_size
    lo, mid, hi = edges[:-2, None], edges[1:-1, None], edges[2:, None]
    rising = (freqs[None, :] - lo) / (mid - lo)
    falling = (hi - freqs[None, :]) / (hi - mid)
    weights = np.maximum(0.0, np.minimum(rising, falling))
    weights[:, (freqs < f_min) | (freqs > f_max)] = 0.0
    return MelFilterbank(weights, float(f_min), float(f_max), int(sample_rate), int(fft_size))


@dataclass(frozen=True, eq=False)
class MelSpectrogram:
    values: np.ndarray  # frames x mel bins
    filterbank: MelFilterbank
    config: StftConfig

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != self.filterbank.mel_bins:
            raise ShapeError(
                f"expected frames x {self.filterbank.mel_bins} mel bins, got {self.values.shape}")
        if np.any(self.values < 0):
            raise ContractError("mel values must be nonnegative")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def with_values(self, values) -> "MelSpectrogram":
        return MelSpectrogram(np.asarray(values, dtype=np.float64), self.filterbank, self.config)


def stft(w: Waveform, cfg: StftConfig | None = None) -> ComplexSpectrogram:
    cfg = cfg or StftConfig()
    n = len(w)
    if n < cfg.window_length:
        raise ContractError(
            f"signal of {n} samples is shorter than one window ({cfg.window_length})")
    frames = np.lib.stride_tricks.sliding_window_view(w.samples, cfg.window_length)
    frames = frames[:: cfg.hop_length][: cfg.n_frames(n)]
    spec = np.fft.rfft(frames * cfg.window_array(), n=cfg.fft_size, axis=1)
    return ComplexSpectrogram(np.abs(spec), np.angle(spec), cfg, w.sample_rate)


def synthesis_norm(cfg: StftConfig, n_frames: int) -> np.ndarray:
    """Per-sample divisor for weighted overlap-add."""
    win = cfg.window_array()
    total = np.zeros(cfg.coverage(n_frames))
    for t in range(n_frames):
        start = t * cfg.hop_length
        total[start:start + cfg.window_length] += win ** 2
    interior_level = np.sum(win ** 2) / cfg.hop_length
    return np.maximum(total, _NORM_FLOOR * interior_level)


def istft(spec: ComplexSpectrogram) -> Waveform:
    cfg = spec.config
    if not cfg.is_cola:
        raise ContractError(
            f"window_length/hop_length = {cfg.window_length}/{cfg.hop_length} "
            "must be an integer >= 2")
    n_frames = spec.n_frames
    frames = np.fft.irfft(spec.complex(), n=cfg.fft_size, axis=1)[:, : cfg.window_length]
    frames = frames * cfg.window_array()
    out = np.zeros(cfg.coverage(n_frames))
    for t in range(n_frames):
        start = t * cfg.hop_length
        out[start:start + cfg.window_length] += frames[t]
    return Waveform(out / synthesis_norm(cfg, n_frames), spec.sample_rate)


def mel_project(spec: ComplexSpectrogram, fb: MelFilterbank) -> MelSpectrogram:
    if fb.n_linear != spec.config.n_bins or fb.fft_size != spec.config.fft_size:
        raise ShapeError(
            f"filterbank covers {fb.n_linear} bins, spectrogram has {spec.config.n_bins}")
    if fb.sample_rate != spec.sample_rate:
        raise ShapeError(
            f"filterbank built for {fb.sample_rate} Hz, spectrogram is {spec.sample_rate} Hz")
    return MelSpectrogram(spec.magnitudes @ fb.weights.T, fb, spec.config)


def expand_mask(mel_mask, fb: MelFilterbank) -> np.ndarray:
    """Lift a frames x mel mask to frames x linear bins.

    Each linear bin takes the filter-weighted average of the mel mask values
    covering it; bins outside every filter get 0.
    """
    values = np.asarray(getattr(mel_mask, "values", mel_mask), dtype=np.float64)
    if values.ndim != 2 or values.shape[1] != fb.mel_bins:
        raise ShapeError(f"mask has shape {values.shape}, filterbank has {fb.mel_bins} mel bins")
    coverage = fb.weights.sum(axis=0)
    covered = coverage > 0
    out = np.zeros((values.shape[0], fb.n_linear))
    out[:, covered] = (values @ fb.weights[:, covered]) / coverage[covered]
    return np.clip(out, 0.0, 1.0)


def apply_linear_mask(mixture: ComplexSpectrogram, linear_mask) -> ComplexSpectrogram:
    mask = np.asarray(linear_mask, dtype=np.float64)
    if mask.shape != mixture.shape:
        raise ShapeError(f"mask shape {mask.shape} != spectrogram shape {mixture.shape}")
    if np.any(mask < 0) or np.any(mask > 1):
        raise ContractError("mask values must lie in [0, 1]")
    return ComplexSpectrogram(mixture.magnitudes * mask, mixture.phases,
                              mixture.config, mixture.sample_rate)


def reconstruct(mixture: ComplexSpectrogram, linear_mask) -> Waveform:
    """Filter the mixture STFT magnitudes and resynthesise with the mixture phase."""
    return istft(apply_linear_mask(mixture, linear_mask))
