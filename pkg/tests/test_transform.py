"""
Unitary transforms, sparse synthesis and oversampled peaks
"""
import numpy as np
import pytest

from src.core import ParameterError, dft, idft, synthesize_from_indices
from src.core.transform import oversampled_peak, sparse_ifft


def _random_spectrum(rng, N):
    return rng.standard_normal(N) + 1j * rng.standard_normal(N)


def test_single_tone_is_flat():
    N = 64
    X = np.zeros(N, dtype=complex)
    X[1] = np.sqrt(N)
    np.testing.assert_allclose(np.abs(idft(X).samples), 1.0, atol=1e-12)


def test_all_ones_is_impulse():
    N = 32
    x = idft(np.ones(N)).samples
    assert x[0] == pytest.approx(np.sqrt(N))
    np.testing.assert_allclose(x[1:], 0.0, atol=1e-12)
    np.testing.assert_allclose(dft(np.ones(N)), x, atol=1e-12)


def test_round_trip(rng):
    for _ in range(100):
        X = _random_spectrum(rng, 128)
        assert np.max(np.abs(dft(idft(X)) - X)) < 1e-12


def test_parseval(rng):
    for _ in range(1000):
        X = _random_spectrum(rng, 128)
        energy = np.vdot(X, X).real
        assert idft(X).energy == pytest.approx(energy, rel=1e-9)


def test_length_mismatch():
    with pytest.raises(ParameterError):
        idft(np.ones(8), N=16)
    with pytest.raises(ParameterError):
        dft(np.ones(8), N=16)


def test_single_index_synthesis():
    x = synthesize_from_indices([5], [3 - 4j], 16)
    np.testing.assert_allclose(np.abs(x.samples), 5 / 4, atol=1e-12)
    assert np.all(synthesize_from_indices([1, 2], [0, 0], 16).samples == 0)


def test_sparse_matches_dense(rng):
    N = 64
    for _ in range(100):
        indices = rng.choice(N, size=12, replace=False)
        coeffs = _random_spectrum(rng, 12)
        dense = np.zeros(N, dtype=complex)
        dense[indices] = coeffs
        sparse = synthesize_from_indices(indices, coeffs, N).samples
        assert np.max(np.abs(sparse - idft(dense).samples)) < 1e-12
        np.testing.assert_array_equal(sparse_ifft(indices, coeffs, N), sparse)


@pytest.mark.parametrize("indices", [[1, 1], [-1], [16]])
def test_synthesis_rejects_bad_indices(indices):
    with pytest.raises(ParameterError):
        synthesize_from_indices(indices, np.ones(len(indices)), 16)


def test_oversampled_peak_reductions(rng):
    X = _random_spectrum(rng, 64)
    assert oversampled_peak(X, 1) == pytest.approx(idft(X).peak_power, rel=1e-12)

    tone = np.zeros(64, dtype=complex)
    tone[3] = 2.0
    for factor in (1, 2, 4, 8):
        assert oversampled_peak(tone, factor) == pytest.approx(4.0 / 64, rel=1e-9)


def test_oversampled_peak_nondecreasing(rng):
    for _ in range(100):
        X = _random_spectrum(rng, 128)
        peaks = [oversampled_peak(X, factor) for factor in (1, 2, 4)]
        assert peaks[0] <= peaks[1] * (1 + 1e-12)
        assert peaks[1] <= peaks[2] * (1 + 1e-12)


def test_oversampling_factor_must_be_positive():
    with pytest.raises(ParameterError):
        oversampled_peak(np.ones(8), 0)
