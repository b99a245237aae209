"""Run configuration: built-in defaults < ``key = value`` file < CLI flags."""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError
from .pipeline import AnalysisConfig
from .priors import DEFAULT_PERCENTILE, DegradationSettings
from .spectral import StftConfig


@dataclass(frozen=True)
class RunConfig:
    window_length: int = 640
    hop_length: int = 160
    fft_size: int = 1024
    window: str = "hann"
    mel_bins: int = 80
    f_min: float = 0.0
    f_max: float | None = None
    percentile: float = DEFAULT_PERCENTILE
    mask: str = "ratio"
    oracle_degrade: str | None = None

    def analysis(self) -> AnalysisConfig:
        stft = StftConfig(self.window_length, self.hop_length, self.fft_size, self.window)
        return AnalysisConfig(stft, self.mel_bins, self.f_min, self.f_max)

    def degradation(self) -> DegradationSettings | None:
        if self.oracle_degrade is None:
            return None
        return DegradationSettings.parse(self.oracle_degrade)

    def updated(self, **overrides) -> "RunConfig":
        known = {f.name: f for f in fields(self)}
        clean = {}
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            clean[key] = _coerce(key, value)
        return replace(self, **clean)


_TYPES = {"window_length": int, "hop_length": int, "fft_size": int, "mel_bins": int,
          "f_min": float, "f_max": float, "percentile": float,
          "window": str, "mask": str, "oracle_degrade": str}


def _coerce(key, value):
    try:
        return _TYPES[key](value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc


def parse_config_text(text: str, name: str = "<config>") -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{name}:{lineno}: expected 'key = value'")
        key = key.strip().replace("-", "_")
        if key not in _TYPES:
            raise ConfigError(f"{name}:{lineno}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def load_config(path=None, **cli_overrides) -> RunConfig:
    cfg = RunConfig()
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise FileNotFoundError(f"no such config file: {path}")
        cfg = cfg.updated(**parse_config_text(path.read_text(encoding="utf-8"), str(path)))
    return cfg.updated(**cli_overrides)
