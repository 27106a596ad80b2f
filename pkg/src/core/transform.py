"""
Unitary DFT/IDFT between frequency blocks and time signals

Both directions use 1/sqrt(N) scaling (scipy.fft with norm="ortho"), so
energy is preserved.
"""
from typing import Optional, Union

import numpy as np
from scipy import fft as sp_fft

from .model import FrequencyBlock, ParameterError, TimeSignal

Spectrum = Union[FrequencyBlock, np.ndarray]


def _spectrum_values(X: Spectrum, N: Optional[int] = None) -> np.ndarray:
    values = X.values if isinstance(X, FrequencyBlock) else np.asarray(X, dtype=np.complex128)
    if values.ndim != 1:
        raise ParameterError("X", "spectrum must be one-dimensional")
    if N is not None and values.size != N:
        raise ParameterError("X", f"expected length {N}, got {values.size}")
    return values


def idft(X: Spectrum, N: Optional[int] = None) -> TimeSignal:
    """x = F^H X"""
    return TimeSignal(samples=sp_fft.ifft(_spectrum_values(X, N), norm="ortho"))


def dft(x: Union[TimeSignal, np.ndarray], N: Optional[int] = None) -> np.ndarray:
    """X = F x, exact inverse of idft"""
    samples = x.samples if isinstance(x, TimeSignal) else np.asarray(x, dtype=np.complex128)
    if N is not None and samples.size != N:
        raise ParameterError("x", f"expected length {N}, got {samples.size}")
    return sp_fft.fft(samples, norm="ortho")


def sparse_ifft(indices: np.ndarray, coeffs: np.ndarray, N: int) -> np.ndarray:
    """Unchecked F^H restricted to the columns `indices`; the solver's inner loop"""
    spectrum = np.zeros(N, dtype=np.complex128)
    spectrum[indices] = coeffs
    return sp_fft.ifft(spectrum, norm="ortho")


def synthesize_from_indices(indices, coeffs, N: int) -> TimeSignal:
    """
    F^H restricted to the columns `indices`, applied to `coeffs`

    Raises:
        ParameterError: duplicate or out-of-range indices, length mismatch
    """
    indices = np.asarray(indices, dtype=int)
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if indices.shape != coeffs.shape:
        raise ParameterError("coeffs", "one coefficient per index is required")
    if indices.size and (indices.min() < 0 or indices.max() >= N):
        raise ParameterError("indices", f"indices must lie in [0, {N})")
    if np.unique(indices).size != indices.size:
        raise ParameterError("indices", "indices must be distinct")
    return TimeSignal(samples=sparse_ifft(indices, coeffs, N))


def oversampled_samples(X: Spectrum, factor: int) -> np.ndarray:
    """
    Length J*N band-limited interpolation of idft(X)

    The spectrum is zero-padded in the middle; every J-th output sample
    equals the Nyquist-rate sample.
    """
    if factor < 1:
        raise ParameterError("factor", f"oversampling factor must be >= 1, got {factor}")
    values = _spectrum_values(X)
    N = values.size
    if factor == 1:
        return sp_fft.ifft(values, norm="ortho")

    half = (N + 1) // 2
    padded = np.zeros(factor * N, dtype=np.complex128)
    padded[:half] = values[:half]
    padded[half + (factor - 1) * N:] = values[half:]
    # norm="forward" leaves the inverse unscaled; 1/sqrt(N) keeps the sample grid unitary
    return sp_fft.ifft(padded, norm="forward") / np.sqrt(N)


def oversampled_peak(X: Spectrum, factor: int = 1) -> float:
    """max |x_os|^2 over the J-times oversampled signal"""
    return float(np.max(np.abs(oversampled_samples(X, factor)) ** 2))
