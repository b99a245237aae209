"""Command-line interface.

Exit codes: 0 success, 1 internal error, 2 input-contract violation.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import metrics
from .config import load_config
from .containers import load_container, save_container, write_pgm
from .errors import ContractError
from .pipeline import (analyse, enhance, ltss_from_waveforms, oracle_prior, prior_shape,
                       separate)
from .priors import DegradationSettings, load_ltss, load_prior, save_ltss, synth_prior
from .signal_io import mix, read_wav, write_wav
from .spectral import MelSpectrogram

log = logging.getLogger("priormask")

EXIT_OK, EXIT_INTERNAL, EXIT_CONTRACT = 0, 1, 2
_ANALYSIS_KEYS = ("window_length", "hop_length", "fft_size", "mel_bins", "f_min", "f_max")


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("analysis")
    g.add_argument("--config", type=Path, help="'key = value' file; flags override it")
    g.add_argument("--window-length", type=int)
    g.add_argument("--hop-length", type=int)
    g.add_argument("--fft-size", type=int)
    g.add_argument("--mel-bins", type=int)
    g.add_argument("--f-min", type=float)
    g.add_argument("--f-max", type=float)


def _run_config(args, *extra_keys):
    overrides = {k: getattr(args, k, None) for k in _ANALYSIS_KEYS + extra_keys}
    return load_config(args.config, **overrides)


def _read_prior(path, mixture_len, sample_rate, rc, degradation, seed_offset=0):
    cfg = rc.analysis()
    if degradation is not None:
        truth = read_wav(path)
        if truth.sample_rate != sample_rate:
            raise ContractError(
                f"{path}: sample rate {truth.sample_rate} Hz, mixture is {sample_rate} Hz")
        d = DegradationSettings(degradation.magnitude_noise_std, degradation.blur_frames,
                                degradation.seed + seed_offset)
        return oracle_prior(truth, d, cfg)
    return load_prior(path, prior_shape(mixture_len, cfg))


def cmd_mix(args) -> int:
    write_wav(mix(read_wav(args.s1), read_wav(args.s2)), args.out)
    return EXIT_OK


def cmd_separate(args) -> int:
    rc = _run_config(args, "mask", "oracle_degrade")
    if rc.mask not in ("binary", "ratio"):
        raise ContractError(f"unknown mask kind {rc.mask!r}; use binary or ratio")
    mixture = read_wav(args.mixture)
    deg = rc.degradation()
    p1 = _read_prior(args.prior1, len(mixture), mixture.sample_rate, rc, deg, 0)
    p2 = _read_prior(args.prior2, len(mixture), mixture.sample_rate, rc, deg, 1)
    e1, e2 = separate(mixture, p1, p2, rc.mask, rc.analysis())
    write_wav(e1, args.out1)
    write_wav(e2, args.out2)
    return EXIT_OK


def cmd_enhance(args) -> int:
    rc = _run_config(args, "oracle_degrade")
    noisy = read_wav(args.noisy)
    prior = _read_prior(args.prior, len(noisy), noisy.sample_rate, rc, rc.degradation())
    profile = load_ltss(args.profile)
    write_wav(enhance(noisy, prior, profile, rc.analysis()), args.out)
    return EXIT_OK


def cmd_ltss(args) -> int:
    rc = _run_config(args, "percentile")
    folder = Path(args.training_dir)
    if not folder.is_dir():
        raise FileNotFoundError(f"no such directory: {folder}")
    files = sorted(folder.glob("*.wav"))
    if not files:
        raise ContractError(f"{folder}: no WAV files")
    clips = [read_wav(f) for f in files]
    if len({c.sample_rate for c in clips}) > 1:
        raise ContractError(f"{folder}: training clips have mixed sample rates")
    profile = ltss_from_waveforms(clips, rc.percentile, rc.analysis())
    save_ltss(profile, args.out)
    log.info("LTSS over %d clips, X=%g -> %s", len(clips), rc.percentile, args.out)
    return EXIT_OK


def cmd_prior(args) -> int:
    """Export a prior container from a clean WAV, optionally degraded."""
    rc = _run_config(args, "oracle_degrade")
    truth = read_wav(args.wav)
    mel = analyse(truth, rc.analysis()).mel
    deg = rc.degradation()
    if deg is not None:
        mel = synth_prior(mel, deg)
    save_container(mel, args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    estimates = [read_wav(p) for p in args.estimates]
    truths = [read_wav(p) for p in args.truths]
    rows = []
    if args.append and Path(args.out).is_file():
        rows = metrics.read_csv(args.out)
    if len(estimates) == 1 and len(truths) == 1:
        value = metrics.snr(estimates[0], truths[0])
        rows.append(metrics.ReportRow(args.utterance_id, args.method, snr_db=value))
    else:
        report = metrics.evaluate_pair(estimates, truths)
        rows.extend(metrics.separation_rows(report, args.utterance_id, args.method))
    metrics.write_csv(rows, args.out)
    return EXIT_OK


def cmd_spectrogram(args) -> int:
    rc = _run_config(args)
    w = read_wav(args.wav)
    analysis = analyse(w, rc.analysis())
    mags = analysis.mel.values if args.mel else analysis.spec.magnitudes
    write_pgm(mags, args.out)
    return EXIT_OK


def cmd_inspect(args) -> int:
    obj = load_container(args.path)
    kind = type(obj).__name__
    extra = ""
    if isinstance(obj, MelSpectrogram):
        extra = f" f_min={obj.filterbank.f_min} f_max={obj.filterbank.f_max}"
    print(f"{args.path}: {kind} shape={tuple(obj.shape)}{extra}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="priormask", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mix", help="sum two sources at their original gain")
    p.add_argument("s1")
    p.add_argument("s2")
    p.add_argument("out")
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("separate", help="split a two-speaker mixture using speech priors")
    p.add_argument("mixture")
    p.add_argument("prior1")
    p.add_argument("prior2")
    p.add_argument("--mask", choices=("binary", "ratio"))
    p.add_argument("--out1", required=True)
    p.add_argument("--out2", required=True)
    p.add_argument("--oracle-degrade", metavar="STD,BLUR,SEED",
                   help="treat priors as clean WAVs and degrade them internally")
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("enhance", help="suppress background with an LTSS threshold mask")
    p.add_argument("noisy")
    p.add_argument("prior")
    p.add_argument("profile")
    p.add_argument("out")
    p.add_argument("--oracle-degrade", metavar="STD,BLUR,SEED")
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("ltss", help="compute an LTSS threshold profile from clean clips")
    p.add_argument("training_dir")
    p.add_argument("--percentile", type=float)
    p.add_argument("--out", required=True)
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_ltss)

    p = sub.add_parser("prior", help="write a prior container from a clean WAV")
    p.add_argument("wav")
    p.add_argument("out")
    p.add_argument("--oracle-degrade", metavar="STD,BLUR,SEED")
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_prior)

    p = sub.add_parser("eval", help="score estimates against references into a CSV report")
    p.add_argument("--estimates", nargs="+", required=True)
    p.add_argument("--truths", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--utterance-id", default="utt")
    p.add_argument("--method", default="unknown")
    p.add_argument("--append", action="store_true", help="merge into an existing report")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("spectrogram", help="export a log-magnitude PGM image")
    p.add_argument("wav")
    p.add_argument("out")
    p.add_argument("--mel", action="store_true")
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_spectrogram)

    p = sub.add_parser("inspect", help="describe a spectrogram container")
    p.add_argument("path")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ContractError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
