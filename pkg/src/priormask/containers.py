"""Binary spectrogram container ("PSPC") and PGM image export.

Layout, all little-endian::

    magic "PSPC" | version u32 | frames u32 | bins u32 | sample_rate u32
    | hop u32 | window u32 | fft u32 | kind u32 | mask_kind u32
    | f_min f64 | f_max f64
    | float32 payload, row-major (magnitudes then phases for complex kind)

``kind`` is 0 for complex STFT, 1 for mel, 2 for mask. ``mask_kind`` indexes
:data:`priormask.masks.MASK_KINDS` and is 0 otherwise. Mel and mask
containers use the filterbank fields; complex ones store zeros there.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import ContainerError
from .spectral import ComplexSpectrogram, MelSpectrogram, StftConfig, mel_filterbank

MAGIC = b"PSPC"
VERSION = 1
HEADER = struct.Struct("<4s9I2d")
KIND_COMPLEX, KIND_MEL, KIND_MASK = 0, 1, 2


def _pack(kind, frames, bins, sample_rate, cfg, mask_kind=0, f_min=0.0, f_max=0.0):
    return HEADER.pack(MAGIC, VERSION, frames, bins, sample_rate,
                       cfg.hop_length if cfg else 0, cfg.window_length if cfg else 0,
                       cfg.fft_size if cfg else 0, kind, mask_kind, f_min, f_max)


def _payload(*arrays) -> bytes:
    return b"".join(np.ascontiguousarray(a, dtype="<f4").tobytes() for a in arrays)


def to_bytes(obj, config: StftConfig | None = None, sample_rate: int = 0) -> bytes:
    from .masks import MASK_KINDS, Mask

    if isinstance(obj, ComplexSpectrogram):
        frames, bins = obj.shape
        return (_pack(KIND_COMPLEX, frames, bins, obj.sample_rate, obj.config)
                + _payload(obj.magnitudes, obj.phases))
    if isinstance(obj, MelSpectrogram):
        fb = obj.filterbank
        frames, bins = obj.shape
        return (_pack(KIND_MEL, frames, bins, fb.sample_rate, obj.config,
                      f_min=fb.f_min, f_max=fb.f_max) + _payload(obj.values))
    if isinstance(obj, Mask):
        frames, bins = obj.shape
        return (_pack(KIND_MASK, frames, bins, sample_rate, config,
                      mask_kind=MASK_KINDS.index(obj.kind)) + _payload(obj.values))
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def save_container(obj, path, config: StftConfig | None = None, sample_rate: int = 0) -> None:
    Path(path).write_bytes(to_bytes(obj, config, sample_rate))


def from_bytes(data: bytes, name: str = "<bytes>"):
    from .masks import MASK_KINDS, Mask

    if len(data) < HEADER.size:
        raise ContainerError(f"{name}: truncated header")
    (magic, version, frames, bins, sr, hop, win, fft,
     kind, mask_kind, f_min, f_max) = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ContainerError(f"{name}: bad magic {magic!r}")
    if version != VERSION:
        raise ContainerError(f"{name}: unsupported container version {version}")
    planes = 2 if kind == KIND_COMPLEX else 1
    expected = HEADER.size + 4 * planes * frames * bins
    if len(data) != expected:
        raise ContainerError(f"{name}: payload is {len(data)} bytes, header implies {expected}")
    flat = np.frombuffer(data, dtype="<f4", offset=HEADER.size).astype(np.float64)
    planes_ = flat.reshape(planes, frames, bins)
    try:
        cfg = StftConfig(win, hop, fft) if hop else None
        if kind == KIND_COMPLEX:
            return ComplexSpectrogram(planes_[0], planes_[1], cfg, sr)
        if kind == KIND_MEL:
            fb = mel_filterbank(sr, fft, bins, f_min, f_max)
            return MelSpectrogram(planes_[0], fb, cfg)
        if kind == KIND_MASK:
            return Mask(planes_[0], MASK_KINDS[mask_kind])
    except (ValueError, IndexError, TypeError, AttributeError) as exc:
        raise ContainerError(f"{name}: inconsistent header ({exc})") from exc
    raise ContainerError(f"{name}: unknown container kind {kind}")


def load_container(path):
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such spectrogram file: {path}")
    return from_bytes(path.read_bytes(), str(path))


def pgm_bytes(magnitudes: np.ndarray, floor: float = 1e-10) -> bytes:
    """8-bit P5 image of a frames x bins magnitude array.

    Log-magnitude, min-max normalised per image; time runs left to right and
    frequency bottom to top.
    """
    log_mag = 20.0 * np.log10(np.maximum(np.asarray(magnitudes, dtype=np.float64), floor))
    lo, hi = log_mag.min(), log_mag.max()
    if hi > lo:
        scaled = np.round(255.0 * (log_mag - lo) / (hi - lo))
    else:
        scaled = np.zeros_like(log_mag)
    image = scaled.astype(np.uint8).T[::-1]
    height, width = image.shape
    return f"P5\n{width} {height}\n255\n".encode("ascii") + image.tobytes()


def write_pgm(magnitudes, path) -> None:
    Path(path).write_bytes(pgm_bytes(magnitudes))


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if len(parts) < 5 or parts[0] != b"P5":
        raise ContainerError(f"{path}: not a binary PGM")
    width, height = int(parts[1]), int(parts[2])
    return np.frombuffer(data[len(data) - width * height:], dtype=np.uint8).reshape(height, width)
