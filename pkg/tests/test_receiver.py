"""
AWGN channel and the power-based receiver
"""
import numpy as np
import pytest

from src.core import ParameterError, TimeSignal, build_legal_set, idft, modulate_block
from src.dither import build_plan, build_single_level_plan, solve
from src.link import awgn, demod_symbols, detect_indices, noise_variance, receive_block


def test_noise_variance():
    assert noise_variance(2.0, 10.0) == pytest.approx(0.2)
    with pytest.raises(ParameterError):
        noise_variance(0.0, 10.0)


def test_awgn_power(rng):
    x = TimeSignal(samples=np.zeros(200000))
    y = awgn(x, 2.0, 3.0, rng)
    measured = np.mean(np.abs(y.samples) ** 2)
    assert measured == pytest.approx(noise_variance(2.0, 3.0), rel=0.02)
    assert np.var(y.samples.real) == pytest.approx(np.var(y.samples.imag), rel=0.03)


def test_awgn_is_reproducible():
    x = TimeSignal(samples=np.ones(8))
    a = awgn(x, 1.0, 5.0, np.random.default_rng(7))
    b = awgn(x, 1.0, 5.0, np.random.default_rng(7))
    np.testing.assert_array_equal(a.samples, b.samples)


def test_detect_legal_top_k():
    legal = build_legal_set(4, 2)
    assert detect_indices(np.array([3.0, 0.1, 2.0, 0.2]), legal) == (0, 2)


@pytest.mark.parametrize("fallback", ["max-power", "hamming"])
def test_detect_illegal_top_k(fallback):
    legal = build_legal_set(4, 2)
    # top-2 is {2, 3}, which is not legal
    Y = np.sqrt(np.array([0.5, 0.0, 3.0, 2.9]))
    assert detect_indices(Y, legal, fallback=fallback) == (0, 2)


def test_detect_rejects_unknown_fallback():
    legal = build_legal_set(4, 2)
    with pytest.raises(ParameterError):
        detect_indices(np.ones(4), legal, fallback="nearest")
    with pytest.raises(ParameterError):
        detect_indices(np.ones(5), legal)


def test_demod_symbols(reference_link):
    _, cons, _ = reference_link
    words = demod_symbols(np.array([0.9 + 1.2j, 0, -2.7 + 3.4j, 0]), (0, 2), cons)
    assert cons.points[words[0]] == 1 + 1j
    assert cons.points[words[1]] == -3 + 3j


def test_noiseless_round_trip(reference_link, draw_bits):
    cfg, cons, legal = reference_link
    for _ in range(50):
        bits = draw_bits(cfg.m)
        X = modulate_block(bits, cfg, cons, legal)
        result = receive_block(idft(X), cfg, cons, legal, reference=X)
        np.testing.assert_array_equal(result.detected_bits, bits)
        assert result.index_errors == 0
        assert result.symbol_errors == 0


def test_noiseless_round_trip_with_dither(reference_link, draw_bits, fast_solver):
    cfg, cons, legal = reference_link
    for _ in range(5):
        bits = draw_bits(cfg.m)
        X = modulate_block(bits, cfg, cons, legal)
        x = idft(X)
        for plan in (build_single_level_plan(X, cfg, 0.5), build_plan(X, cfg, cons, 0.0)):
            solution = solve(x, plan, fast_solver)
            result = receive_block(solution.signal, cfg, cons, legal, reference=X)
            np.testing.assert_array_equal(result.detected_bits, bits)


def test_high_snr_has_no_errors(reference_link, draw_bits, rng):
    cfg, cons, legal = reference_link
    for _ in range(20):
        bits = draw_bits(cfg.m)
        X = modulate_block(bits, cfg, cons, legal)
        y = awgn(idft(X), 2.0, 40.0, rng)
        result = receive_block(y, cfg, cons, legal, reference=X)
        np.testing.assert_array_equal(result.detected_bits, bits)


def test_low_snr_counts_errors(reference_link, draw_bits, rng):
    cfg, cons, legal = reference_link
    bits = draw_bits(cfg.m)
    X = modulate_block(bits, cfg, cons, legal)
    y = awgn(idft(X), 2.0, -5.0, rng)
    result = receive_block(y, cfg, cons, legal, reference=X)
    assert np.count_nonzero(result.detected_bits != bits) > 0
    assert result.index_errors + result.symbol_errors > 0
    assert result.pattern_ranks.shape == (cfg.g,)
    assert result.symbol_words.shape == (cfg.g, cfg.k)
