"""
OFDM-IM receiver

Power-based index detection (the k strongest entries of each subblock are
declared active), minimum-distance symbol decisions and bit recovery. The
receiver needs no knowledge of the dither: idle tones are discarded.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.index_mapper import ActivationPattern, LegalPatternSet
from ..core.model import Constellation, FrequencyBlock, ParameterError, SystemConfig, TimeSignal
from ..core.transform import dft

FALLBACK_MODES = ("max-power", "hamming")


@dataclass(frozen=True, eq=False)
class ReceiveResult:
    """
    Decisions for one block

    `index_errors` / `symbol_errors` are only meaningful when the transmitted
    block was supplied as reference (zero otherwise).
    """
    detected_bits: np.ndarray
    pattern_ranks: np.ndarray
    symbol_words: np.ndarray
    index_errors: int = 0
    symbol_errors: int = 0


def _bits_of(words: np.ndarray, width: int) -> np.ndarray:
    """MSB-first bits of each integer along a new last axis"""
    shifts = np.arange(width - 1, -1, -1)
    return ((words[..., None] >> shifts) & 1).astype(np.uint8)


def _detect_ranks(powers: np.ndarray, legal: LegalPatternSet, fallback: str) -> np.ndarray:
    """Legal-pattern rank per row of a (rows, n) power matrix"""
    if fallback not in FALLBACK_MODES:
        raise ParameterError("fallback", f"unknown fallback {fallback!r}")
    rows, n = powers.shape
    # stable sort: equal powers keep the lower index first
    order = np.argsort(-powers, axis=1, kind="stable")[:, :legal.k]
    top = np.zeros((rows, n), dtype=bool)
    np.put_along_axis(top, order, True, axis=1)

    masks = legal.masks
    match = (top[:, None, :] == masks[None, :, :]).all(axis=2)
    ranks = match.argmax(axis=1)
    illegal = ~match.any(axis=1)
    if np.any(illegal):
        captured = powers[illegal] @ masks.T.astype(float)
        if fallback == "max-power":
            # argmax keeps the first maximum, i.e. the lexicographically lowest pattern
            ranks[illegal] = captured.argmax(axis=1)
        else:
            distance = (top[illegal][:, None, :] != masks[None, :, :]).sum(axis=2)
            for row, dist, power in zip(np.flatnonzero(illegal), distance, captured):
                ranks[row] = np.lexsort((-power, dist))[0]
    return ranks


def detect_indices(
    Y_sub: np.ndarray,
    legal: LegalPatternSet,
    fallback: str = "max-power",
) -> ActivationPattern:
    """
    Top-k power detector for one received subblock

    When the k strongest entries do not form a legal pattern, `fallback`
    picks the legal pattern with the largest captured power ("max-power") or
    the nearest one in Hamming distance ("hamming", ties by captured power).
    """
    powers = np.abs(np.asarray(Y_sub, dtype=np.complex128)) ** 2
    if powers.size != legal.n:
        raise ParameterError("Y_sub", f"expected {legal.n} entries, got {powers.size}")
    rank = _detect_ranks(powers[None, :], legal, fallback)[0]
    return legal.patterns[rank]


def _nearest_words(values: np.ndarray, cons: Constellation) -> np.ndarray:
    distance = np.abs(values[..., None] - cons.points) ** 2
    # argmin keeps the first minimum, i.e. the smaller bit word on ties
    return distance.argmin(axis=-1)


def demod_symbols(Y_sub: np.ndarray, pattern: ActivationPattern, cons: Constellation) -> np.ndarray:
    """Minimum-distance decision (bit-word values) on each active index"""
    values = np.asarray(Y_sub, dtype=np.complex128)[list(pattern)]
    return _nearest_words(values, cons)


def receive_block(
    y: TimeSignal,
    cfg: SystemConfig,
    cons: Constellation,
    legal: LegalPatternSet,
    reference: Optional[FrequencyBlock] = None,
    fallback: str = "max-power",
) -> ReceiveResult:
    """
    Forward transform, per-subblock detection and demodulation, bit demapping

    Args:
        reference: transmitted block; when given, index and symbol decision
            errors are counted against it
    """
    Y = dft(y, cfg.N).reshape(cfg.g, cfg.n)
    ranks = _detect_ranks(np.abs(Y) ** 2, legal, fallback)
    active = legal.masks[ranks]
    # boolean indexing walks each subblock in ascending index order
    words = _nearest_words(Y[active].reshape(cfg.g, cfg.k), cons)

    bits = np.concatenate(
        [_bits_of(ranks, cfg.p1), _bits_of(words, cfg.bits_per_symbol).reshape(cfg.g, -1)],
        axis=1,
    ).ravel()

    index_errors = symbol_errors = 0
    if reference is not None:
        sent_active = reference.activation.reshape(cfg.g, cfg.n)
        sent_values = reference.values.reshape(cfg.g, cfg.n)[sent_active].reshape(cfg.g, cfg.k)
        index_errors = int(np.any(sent_active != active, axis=1).sum())
        symbol_errors = int((_nearest_words(sent_values, cons) != words).sum())

    return ReceiveResult(
        detected_bits=bits,
        pattern_ranks=ranks,
        symbol_words=words,
        index_errors=index_errors,
        symbol_errors=symbol_errors,
    )
