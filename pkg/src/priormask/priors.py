"""Speech priors and Long-Term Speech Spectra thresholds.

A prior is a mel spectrogram estimate of one speaker's clean speech. It is
either loaded from a container file or synthesised from ground truth by a
controlled degradation (temporal blur plus log-normal magnitude noise).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .containers import load_container
from .errors import ConfigError, ContainerError, ContractError, ShapeError
from .spectral import MelSpectrogram

DEFAULT_PERCENTILE = 75.0


@dataclass(frozen=True)
class DegradationSettings:
    magnitude_noise_std: float = 0.0
    blur_frames: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.magnitude_noise_std < 0:
            raise ConfigError("magnitude_noise_std must be >= 0")
        if self.blur_frames < 1 or self.blur_frames % 2 == 0:
            raise ConfigError(f"blur_frames must be odd and >= 1, got {self.blur_frames}")

    @classmethod
    def parse(cls, text: str) -> "DegradationSettings":
        """Parse 'std,blur,seed'."""
        try:
            std, blur, seed = (p.strip() for p in text.split(","))
            return cls(float(std), int(blur), int(seed))
        except ValueError as exc:
            raise ConfigError(f"expected 'std,blur,seed', got {text!r}") from exc

    @property
    def is_identity(self) -> bool:
        return self.magnitude_noise_std == 0 and self.blur_frames == 1


@dataclass(frozen=True, eq=False)
class LtssProfile:
    percentile: float
    thresholds: np.ndarray
    pooled: np.ndarray | None = None  # frames x bins, each column sorted

    @property
    def n_bins(self) -> int:
        return self.thresholds.shape[0]

    def at(self, percentile: float) -> np.ndarray:
        """Thresholds for another percentile from the same pooled data."""
        if self.pooled is None:
            raise ContractError("profile was loaded without pooled magnitudes")
        if not 0 < percentile < 100:
            raise ConfigError(f"percentile must be in (0, 100), got {percentile}")
        return _percentile(self.pooled, percentile)


def load_prior(path, expected_shape: tuple[int, int] | None = None) -> MelSpectrogram:
    obj = load_container(path)
    if not isinstance(obj, MelSpectrogram):
        raise ContainerError(f"{path}: expected a mel spectrogram, found {type(obj).__name__}")
    if expected_shape is not None and tuple(obj.shape) != tuple(expected_shape):
        raise ShapeError(
            f"{path}: prior shape {tuple(obj.shape)} does not match expected {tuple(expected_shape)}")
    return obj


def box_blur(values: np.ndarray, width: int) -> np.ndarray:
    """Moving average along time; edge frames are replicated."""
    if width == 1:
        return values.copy()
    half = width // 2
    padded = np.pad(values, ((half, half), (0, 0)), mode="edge")
    csum = np.cumsum(np.vstack([np.zeros((1, values.shape[1])), padded]), axis=0)
    return (csum[width:] - csum[:-width]) / width


def degradation_noise(shape: tuple[int, int], std: float, seed: int) -> np.ndarray:
    # Philox is counter-based: entry (t, f) is always drawn from stream position
    # t * bins + f for a given seed.
    rng = np.random.Generator(np.random.Philox(key=seed))
    return std * rng.standard_normal(shape)


def synth_prior(truth: MelSpectrogram, d: DegradationSettings) -> MelSpectrogram:
    if d.is_identity:
        return truth.with_values(truth.values.copy())
    blurred = box_blur(truth.values, d.blur_frames)
    if d.magnitude_noise_std == 0:
        return truth.with_values(blurred)
    eps = degradation_noise(truth.values.shape, d.magnitude_noise_std, d.seed)
    return truth.with_values(np.maximum(blurred * np.exp(eps), 0.0))


def _percentile(pooled: np.ndarray, x: float) -> np.ndarray:
    """Per-column percentile of column-sorted data, interpolating linearly
    between the order statistics around rank x/100 * (n - 1)."""
    n = pooled.shape[0]
    rank = x / 100 * (n - 1)
    lo = int(np.floor(rank))
    hi = min(lo + 1, n - 1)
    frac = rank - lo
    return pooled[lo] + frac * (pooled[hi] - pooled[lo])


def compute_ltss(training: Sequence[MelSpectrogram],
                 percentile: float = DEFAULT_PERCENTILE) -> LtssProfile:
    if len(training) == 0:
        raise ContractError("LTSS needs at least one training spectrogram")
    if not 0 < percentile < 100:
        raise ConfigError(f"percentile must be in (0, 100), got {percentile}")
    bins = {t.values.shape[1] for t in training}
    if len(bins) != 1:
        raise ShapeError(f"training spectrograms disagree on mel bin count: {sorted(bins)}")
    pooled = np.sort(np.vstack([t.values for t in training]), axis=0)
    return LtssProfile(float(percentile), _percentile(pooled, percentile), pooled)


def save_ltss(profile: LtssProfile, path) -> None:
    lines = [f"LTSS X={profile.percentile!r} bins={profile.n_bins}"]
    lines += [f"{i} {float(t)!r}" for i, t in enumerate(profile.thresholds)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_ltss(path) -> LtssProfile:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such LTSS profile: {path}")
    lines = [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    try:
        magic, x_field, bins_field = lines[0].split()
        if magic != "LTSS" or not x_field.startswith("X=") or not bins_field.startswith("bins="):
            raise ValueError("bad header")
        percentile = float(x_field[2:])
        n = int(bins_field[5:])
        thresholds = np.zeros(n)
        seen = set()
        for ln in lines[1:]:
            idx, val = ln.split()
            thresholds[int(idx)] = float(val)
            seen.add(int(idx))
    except (ValueError, IndexError) as exc:
        raise ContainerError(f"{path}: malformed LTSS profile ({exc})") from exc
    if seen != set(range(n)):
        raise ContainerError(f"{path}: expected thresholds for bins 0..{n - 1}")
    return LtssProfile(percentile, thresholds)
