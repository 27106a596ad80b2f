"""
AWGN channel with Eb/N0 accounting
"""
import numpy as np

from ..core.model import ParameterError, TimeSignal


def noise_variance(eb: float, snr_db: float) -> float:
    """N0 = Eb / 10^(snr_db/10), the variance per complex sample"""
    if eb <= 0:
        raise ParameterError("eb", f"energy per bit must be positive, got {eb}")
    return eb / 10.0 ** (snr_db / 10.0)


def awgn(x: TimeSignal, eb: float, snr_db: float, rng: np.random.Generator) -> TimeSignal:
    """Add circularly-symmetric complex Gaussian noise of variance N0 per sample"""
    sigma = np.sqrt(noise_variance(eb, snr_db) / 2.0)
    shape = x.samples.shape
    noise = sigma * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return TimeSignal(samples=x.samples + noise)
