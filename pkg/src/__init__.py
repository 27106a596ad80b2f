"""
OFDM-IM with single-level and multilevel dither PAPR reduction
"""

__version__ = "0.1.0"
__author__ = "OFDM-IM Dither Team"
__description__ = "OFDM index modulation with multilevel dither PAPR reduction and Monte-Carlo harness"
