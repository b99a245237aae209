"""Objective evaluation: BSS-eval style SDR/SIR/SAR and plain SNR.

The decomposition uses time-invariant scalar projections (no distortion
filters), so absolute values are stricter than the reference toolbox's.
"""
from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ContractError, DegenerateSignalError
from .signal_io import Waveform, trim_to_common

DB_CAP = 100.0
CSV_COLUMNS = ("utterance_id", "method", "sdr_db", "sir_db", "sar_db", "snr_db")


# Energies below this fraction of the estimate's energy are round-off; far
# beneath the 1e10 ratio the dB cap already represents.
_ZERO_ENERGY = 1e-20


def ratio_db(num: float, den: float, zero: float = 0.0) -> float:
    """10 log10(num / den) clipped to +/-DB_CAP; energies <= ``zero`` count as 0.

    A zero numerator gives the floor even when the denominator is zero too.
    """
    if num <= zero:
        return -DB_CAP
    if den <= zero:
        return DB_CAP
    return float(np.clip(10.0 * np.log10(num / den), -DB_CAP, DB_CAP))


@dataclass(frozen=True)
class Decomposition:
    s_target: np.ndarray
    e_interf: np.ndarray
    e_artif: np.ndarray


@dataclass(frozen=True)
class SourceScore:
    sdr: float
    sir: float
    sar: float
    target_index: int


@dataclass(frozen=True)
class SeparationReport:
    scores: list[SourceScore]
    permutation: tuple[int, ...] = field(default=())

    @property
    def mean_sdr(self) -> float:
        return float(np.mean([s.sdr for s in self.scores]))


@dataclass(frozen=True)
class EnhancementReport:
    snr: float
    length: int
    offset: int = 0


def _check_rates(waves):
    rates = {w.sample_rate for w in waves}
    if len(rates) > 1:
        raise ContractError(f"sample rates differ: {sorted(rates)}")


def decompose(estimate: np.ndarray, targets: np.ndarray, j: int) -> Decomposition:
    """Split ``estimate`` into target, interference and artifact parts.

    ``targets`` is sources x samples, all of the same length as ``estimate``.
    """
    s = targets[j]
    energy = s @ s
    if energy <= 0:
        raise DegenerateSignalError(f"target {j} has zero energy")
    gram = targets @ targets.T
    if np.linalg.matrix_rank(gram, tol=1e-10 * np.trace(gram)) < targets.shape[0]:
        raise DegenerateSignalError("reference sources are linearly dependent")
    s_target = (estimate @ s) / energy * s
    coeffs = np.linalg.solve(gram, targets @ estimate)
    p_all = coeffs @ targets
    return Decomposition(s_target, p_all - s_target, estimate - p_all)


def bss_decompose(estimate: Waveform, targets: Sequence[Waveform], target_index: int) -> SourceScore:
    _check_rates([estimate, *targets])
    trimmed = trim_to_common(estimate, *targets)
    d = decompose(trimmed[0], np.vstack(trimmed[1:]), target_index)
    zero = _ZERO_ENERGY * (trimmed[0] @ trimmed[0])
    t2 = d.s_target @ d.s_target
    noise = d.e_interf + d.e_artif
    signal = d.s_target + d.e_interf
    return SourceScore(
        sdr=ratio_db(t2, noise @ noise, zero),
        sir=ratio_db(t2, d.e_interf @ d.e_interf, zero),
        sar=ratio_db(signal @ signal, d.e_artif @ d.e_artif, zero),
        target_index=target_index,
    )


def snr(estimate: Waveform, reference: Waveform) -> float:
    return enhancement_report(estimate, reference).snr


def enhancement_report(estimate: Waveform, reference: Waveform) -> EnhancementReport:
    _check_rates([estimate, reference])
    est, ref = trim_to_common(estimate, reference)
    r2 = ref @ ref
    if r2 <= 0:
        raise DegenerateSignalError("reference has zero energy")
    err = ref - est
    return EnhancementReport(ratio_db(r2, err @ err, _ZERO_ENERGY * r2), len(ref))


def evaluate_pair(estimates: Sequence[Waveform], truths: Sequence[Waveform]) -> SeparationReport:
    """Score estimates against truths under the best-SDR assignment."""
    if len(estimates) != len(truths):
        raise ContractError(f"{len(estimates)} estimates for {len(truths)} truths")
    best = None
    for perm in itertools.permutations(range(len(truths))):
        scores = [bss_decompose(e, truths, j) for e, j in zip(estimates, perm)]
        total = sum(s.sdr for s in scores)
        if best is None or total > best[0]:
            best = (total, SeparationReport(scores, tuple(perm)))
    return best[1]


@dataclass(frozen=True)
class ReportRow:
    utterance_id: str
    method: str
    sdr_db: float | None = None
    sir_db: float | None = None
    sar_db: float | None = None
    snr_db: float | None = None


def _cell(v) -> str:
    return "" if v is None else f"{v:.6f}"


def write_csv(rows: Sequence[ReportRow], path) -> None:
    rows = sorted(rows, key=lambda r: (r.utterance_id, r.method))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow([r.utterance_id, r.method, _cell(r.sdr_db), _cell(r.sir_db),
                        _cell(r.sar_db), _cell(r.snr_db)])


def read_csv(path) -> list[ReportRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ContractError(f"{path}: unexpected columns {reader.fieldnames}")
        return [ReportRow(r["utterance_id"], r["method"],
                          *(float(r[c]) if r[c] else None for c in CSV_COLUMNS[2:]))
                for r in reader]


def separation_rows(report: SeparationReport, utterance_id: str, method: str) -> list[ReportRow]:
    return [ReportRow(f"{utterance_id}/s{s.target_index + 1}", method, s.sdr, s.sir, s.sar)
            for s in report.scores]
