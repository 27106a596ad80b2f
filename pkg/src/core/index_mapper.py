"""
OFDM-IM index mapper

Maps p1 index bits to an activation pattern per subblock and assembles full
frequency-domain blocks from information bits.
"""
from dataclasses import dataclass
from itertools import combinations, islice
from math import comb
from typing import List, Tuple

import numpy as np

from .model import (
    Constellation, FrequencyBlock, ParameterError, SystemConfig,
    bits_to_int, int_to_bits,
)

ActivationPattern = Tuple[int, ...]


@dataclass(frozen=True)
class LegalPatternSet:
    """
    The 2^p1 activation patterns usable in a subblock

    Patterns are sorted 0-based k-subsets of range(n); `rank` inverts the
    list position.
    """
    n: int
    k: int
    p1: int
    patterns: Tuple[ActivationPattern, ...]

    def __post_init__(self):
        object.__setattr__(self, "_ranks", {p: i for i, p in enumerate(self.patterns)})
        masks = np.zeros((len(self.patterns), self.n), dtype=bool)
        for row, pattern in enumerate(self.patterns):
            masks[row, list(pattern)] = True
        masks.setflags(write=False)
        object.__setattr__(self, "masks", masks)

    def __len__(self) -> int:
        return len(self.patterns)

    def __contains__(self, pattern) -> bool:
        return tuple(pattern) in self._ranks

    def rank(self, pattern) -> int:
        try:
            return self._ranks[tuple(pattern)]
        except KeyError:
            raise ParameterError("pattern", f"{tuple(pattern)} is not a legal pattern") from None

    def as_table(self) -> List[List[int]]:
        """Patterns as plain lists (run reports)"""
        return [list(p) for p in self.patterns]


def build_legal_set(n: int, k: int) -> LegalPatternSet:
    """First 2^p1 k-subsets of range(n) in lexicographic order"""
    if not 1 <= k < n:
        raise ParameterError("k", f"active count must satisfy 1 <= k < n={n}, got {k}")
    p1 = _index_bits(n, k)
    patterns = tuple(islice(combinations(range(n), k), 1 << p1))
    return LegalPatternSet(n=n, k=k, p1=p1, patterns=patterns)


def _index_bits(n: int, k: int) -> int:
    return comb(n, k).bit_length() - 1


def bits_to_pattern(bits, legal: LegalPatternSet) -> ActivationPattern:
    """Select the activation pattern addressed by a p1-bit word"""
    word = bits if isinstance(bits, (int, np.integer)) else bits_to_int(bits)
    if not 0 <= word < len(legal):
        raise ParameterError("bits", f"index word {word} outside [0, {len(legal)})")
    return legal.patterns[word]


def pattern_to_bits(pattern, legal: LegalPatternSet) -> np.ndarray:
    """Inverse of bits_to_pattern"""
    return int_to_bits(legal.rank(pattern), legal.p1)


def modulate_block(
    bits,
    cfg: SystemConfig,
    cons: Constellation,
    legal: LegalPatternSet,
) -> FrequencyBlock:
    """
    Assemble one OFDM-IM block from m information bits

    Per subblock the first p1 bits pick the pattern and the next p2 bits pick
    the k symbols, filled into the active indices in ascending order.

    Raises:
        ParameterError: bit length differs from m
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 1 or bits.size != cfg.m:
        raise ParameterError("bits", f"expected {cfg.m} bits, got {bits.size}")

    q = cfg.bits_per_symbol
    groups = bits.reshape(cfg.g, cfg.p)
    index_words = _words(groups[:, :cfg.p1])
    symbol_words = _words(groups[:, cfg.p1:].reshape(cfg.g, cfg.k, q))

    masks = legal.masks[index_words]
    values = np.zeros((cfg.g, cfg.n), dtype=np.complex128)
    # boolean assignment fills row-major, i.e. ascending index within each subblock
    values[masks] = cons.points[symbol_words].ravel()
    return FrequencyBlock(values=values.ravel(), activation=masks.ravel())


def _words(bit_groups: np.ndarray) -> np.ndarray:
    """MSB-first integer value along the last axis"""
    width = bit_groups.shape[-1]
    if width == 0:
        return np.zeros(bit_groups.shape[:-1], dtype=np.int64)
    weights = 1 << np.arange(width - 1, -1, -1, dtype=np.int64)
    return bit_groups.astype(np.int64) @ weights


def demodulate_block(
    block: FrequencyBlock,
    cfg: SystemConfig,
    cons: Constellation,
    legal: LegalPatternSet,
) -> np.ndarray:
    """
    Genie disassembly of a modulated block back to its m bits

    Reads the pattern from the activation mask and demaps the exact active
    symbols; used to verify the mapper's bijectivity.
    """
    q = cfg.bits_per_symbol
    out = np.empty((cfg.g, cfg.p), dtype=np.uint8)
    values = block.values.reshape(cfg.g, cfg.n)
    masks = block.activation.reshape(cfg.g, cfg.n)
    for beta in range(cfg.g):
        pattern = tuple(int(i) for i in np.flatnonzero(masks[beta]))
        out[beta, :cfg.p1] = pattern_to_bits(pattern, legal)
        for gamma, index in enumerate(pattern):
            start = cfg.p1 + gamma * q
            out[beta, start:start + q] = cons.demap(values[beta, index])
    return out.ravel()

