"""
Link-level modules: metrics, AWGN channel, power-based receiver
"""

from .metrics import (
    PaprSample, CcdfTable, CcdfAccumulator, EnergyTally, BerTally,
    papr, ccdf, subblock_margins, realized_nu, energy_per_bit,
)
from .channel import awgn, noise_variance
from .receiver import ReceiveResult, detect_indices, demod_symbols, receive_block

__all__ = [
    'PaprSample',
    'CcdfTable',
    'CcdfAccumulator',
    'EnergyTally',
    'BerTally',
    'papr',
    'ccdf',
    'subblock_margins',
    'realized_nu',
    'energy_per_bit',
    'awgn',
    'noise_variance',
    'ReceiveResult',
    'detect_indices',
    'demod_symbols',
    'receive_block',
]
