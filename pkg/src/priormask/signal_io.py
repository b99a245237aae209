"""Mono waveforms, 16-bit PCM WAV I/O and additive mixing."""
from __future__ import annotations

import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ContractError, WavFormatError

DEFAULT_SAMPLE_RATE = 16000
_FULL_SCALE = 32768.0


@dataclass(frozen=True, eq=False)
class Waveform:
    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ContractError(f"waveform must be 1-D, got shape {samples.shape}")
        if int(self.sample_rate) <= 0:
            raise ContractError(f"sample_rate must be positive, got {self.sample_rate}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self):
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate


def read_wav(path) -> Waveform:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such WAV file: {path}")
    try:
        with wave.open(str(path), "rb") as wf:
            channels = wf.getnchannels()
            width = wf.getsampwidth()
            rate = wf.getframerate()
            raw = wf.readframes(wf.getnframes())
    except wave.Error as exc:
        # the stdlib reader rejects anything that is not plain PCM
        raise WavFormatError(f"unsupported compression or malformed WAV: {path} ({exc})") from exc
    except EOFError as exc:
        raise WavFormatError(f"truncated WAV: {path}") from exc
    if channels != 1:
        raise WavFormatError(f"unsupported channel count: {channels} (mono required)")
    if width != 2:
        raise WavFormatError(f"unsupported bit depth: {8 * width} bits (16 required)")
    ints = np.frombuffer(raw, dtype="<i2")
    return Waveform(ints.astype(np.float64) / _FULL_SCALE, rate)


def quantize(samples) -> np.ndarray:
    """Clip to [-1, 1] and round to 16-bit integers."""
    x = np.clip(np.asarray(samples, dtype=np.float64), -1.0, 1.0)
    return np.clip(np.round(x * _FULL_SCALE), -32768, 32767).astype("<i2")


def write_wav(w: Waveform, path) -> None:
    if not np.all(np.isfinite(w.samples)):
        raise ContractError("cannot write non-finite samples")
    path = Path(path)
    data = quantize(w.samples).tobytes()
    try:
        fh = open(path, "wb")
    except OSError as exc:
        raise ContractError(f"cannot write {path}: {exc}") from exc
    with fh, wave.open(fh, "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(w.sample_rate)
        wf.writeframes(data)


def mix(s1: Waveform, s2: Waveform) -> Waveform:
    """Sum two sources at their original gain; the shorter one is zero-padded."""
    if s1.sample_rate != s2.sample_rate:
        raise ContractError(
            f"sample rate mismatch: {s1.sample_rate} Hz vs {s2.sample_rate} Hz")
    n = max(len(s1), len(s2))
    out = np.zeros(n)
    out[: len(s1)] += s1.samples
    out[: len(s2)] += s2.samples
    return Waveform(out, s1.sample_rate)


def trim_to_common(*waves: Waveform) -> list[np.ndarray]:
    n = min(len(w) for w in waves)
    return [w.samples[:n] for w in waves]
