"""
Core OFDM-IM modules: system model, index mapper, spectral transform
"""

from .model import (
    SystemConfig, Constellation, FrequencyBlock, TimeSignal,
    ParameterError, ConsistencyError, make_config, make_qam,
)
from .index_mapper import (
    ActivationPattern, LegalPatternSet, build_legal_set, bits_to_pattern,
    pattern_to_bits, modulate_block, demodulate_block,
)
from .transform import idft, dft, synthesize_from_indices, oversampled_peak

__all__ = [
    'SystemConfig',
    'Constellation',
    'FrequencyBlock',
    'TimeSignal',
    'ParameterError',
    'ConsistencyError',
    'make_config',
    'make_qam',
    'ActivationPattern',
    'LegalPatternSet',
    'build_legal_set',
    'bits_to_pattern',
    'pattern_to_bits',
    'modulate_block',
    'demodulate_block',
    'idft',
    'dft',
    'synthesize_from_indices',
    'oversampled_peak',
]
