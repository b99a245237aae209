"""Prior-guided time-frequency masking for speech separation and enhancement."""
from .errors import ContractError
from .masks import Mask, apply_mask, binary_masks, ideal_masks, ratio_masks, threshold_mask
from .metrics import bss_decompose, evaluate_pair, snr
from .pipeline import AnalysisConfig, analyse, enhance, separate
from .priors import DegradationSettings, LtssProfile, compute_ltss, load_prior, synth_prior
from .signal_io import Waveform, mix, read_wav, write_wav
from .spectral import (ComplexSpectrogram, MelFilterbank, MelSpectrogram, StftConfig,
                       expand_mask, istft, mel_filterbank, mel_project, reconstruct, stft)

__version__ = "0.1.0"
