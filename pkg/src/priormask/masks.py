"""Mel-domain time-frequency masks.

Binary ("winner takes all") and ratio masks from two speech priors, the
LTSS threshold mask for single-speaker enhancement, and ideal masks built
from ground-truth sources.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ShapeError
from .spectral import MelSpectrogram

MASK_KINDS = ("binary", "ratio", "threshold", "ideal-binary", "ideal-ratio")
BINARY_KINDS = ("binary", "threshold", "ideal-binary")
RATIO_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class Mask:
    values: np.ndarray  # frames x mel bins, in [0, 1]
    kind: str

    def __post_init__(self):
        if self.kind not in MASK_KINDS:
            raise ContractError(f"unknown mask kind {self.kind!r}")
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ShapeError(f"mask must be 2-D, got shape {v.shape}")
        if np.any(v < 0) or np.any(v > 1):
            raise ContractError("mask values must lie in [0, 1]")
        if self.kind in BINARY_KINDS and not np.all((v == 0) | (v == 1)):
            raise ContractError(f"{self.kind} mask must be 0/1 valued")
        object.__setattr__(self, "values", v)

    @property
    def shape(self):
        return self.values.shape


def _values(s) -> np.ndarray:
    return np.asarray(getattr(s, "values", s), dtype=np.float64)


def _check_pair(a, b):
    if a.shape != b.shape:
        raise ShapeError(f"spectrogram shapes differ: {a.shape} vs {b.shape}")


def binary_masks(s1, s2, kind: str = "binary") -> tuple[Mask, Mask]:
    """F1 = [S1 > S2], F2 = 1 - F1. Ties go to the second speaker."""
    a, b = _values(s1), _values(s2)
    _check_pair(a, b)
    f1 = (a > b).astype(np.float64)
    return Mask(f1, kind), Mask(1.0 - f1, kind)


def ratio_masks(s1, s2, kind: str = "ratio") -> tuple[Mask, Mask]:
    """F_i = sqrt(S_i^2 / (S1^2 + S2^2)).

    Bins where S1^2 + S2^2 <= RATIO_EPS (neither speaker predicted active)
    get 0 in both masks.
    """
    a, b = _values(s1), _values(s2)
    _check_pair(a, b)
    denom = a ** 2 + b ** 2
    active = denom > RATIO_EPS
    safe = np.where(active, denom, 1.0)
    f1 = np.where(active, np.sqrt(a ** 2 / safe), 0.0)
    f2 = np.where(active, np.sqrt(b ** 2 / safe), 0.0)
    return Mask(np.minimum(f1, 1.0), kind), Mask(np.minimum(f2, 1.0), kind)


def separation_masks(s1, s2, method: str) -> tuple[Mask, Mask]:
    if method == "binary":
        return binary_masks(s1, s2)
    if method == "ratio":
        return ratio_masks(s1, s2)
    raise ContractError(f"unknown mask method {method!r}; use 'binary' or 'ratio'")


def ideal_masks(t1, t2, kind: str) -> tuple[Mask, Mask]:
    """Same formulas as the prior-driven masks, fed with ground-truth spectrograms."""
    if kind == "binary":
        return binary_masks(t1, t2, kind="ideal-binary")
    if kind == "ratio":
        return ratio_masks(t1, t2, kind="ideal-ratio")
    raise ContractError(f"unknown ideal mask kind {kind!r}")


def threshold_mask(s, profile) -> Mask:
    """F = [S > tau], per mel bin."""
    values = _values(s)
    tau = np.asarray(profile.thresholds, dtype=np.float64)
    if values.ndim != 2 or values.shape[1] != tau.shape[0]:
        raise ShapeError(
            f"prior has {values.shape[-1]} bins, LTSS profile has {tau.shape[0]}")
    return Mask((values > tau[None, :]).astype(np.float64), "threshold")


def apply_mask(c: MelSpectrogram, f: Mask) -> MelSpectrogram:
    if c.values.shape != f.values.shape:
        raise ShapeError(f"spectrogram shape {c.values.shape} != mask shape {f.values.shape}")
    return c.with_values(c.values * f.values)
