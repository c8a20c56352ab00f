#!/usr/bin/env python3
"""
DFT, convolution and shift primitives
"""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.algorithms.dft_core import (
    as_complex_vector, circulant_shift, circular_convolve, dft, dft_matrix, flip_conjugate, idft,
    is_power_of_two, unit_vector,
)
from app.errors import DimensionError, ShiftIndexError


def _random_vector(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def test_dft_of_impulse_is_flat():
    assert_allclose(dft(unit_vector(4, 0)), 0.5 * np.ones(4), atol=1e-15)


def test_dft_of_ones_concentrates_on_dc():
    n_sec = 64
    expected = np.zeros(n_sec, dtype=complex)
    expected[0] = np.sqrt(n_sec)
    assert_allclose(dft(np.ones(n_sec)), expected, atol=1e-12)
    assert_allclose(idft(expected), np.ones(n_sec), atol=1e-12)


def test_idft_of_impulse():
    assert_allclose(idft(unit_vector(4, 0)), 0.5 * np.ones(4), atol=1e-15)


def test_round_trip_against_matrix_oracle():
    rng = np.random.default_rng(1)
    u = dft_matrix(64)
    for _ in range(20):
        v = _random_vector(rng, 64)
        assert_allclose(dft(v), u.conj().T @ v, atol=1e-12)
        assert_allclose(idft(dft(v)), v, atol=1e-12)


@pytest.mark.parametrize("n", [12, 30, 64])
def test_unitarity_any_length(n):
    rng = np.random.default_rng(n)
    v = _random_vector(rng, n)
    assert np.linalg.norm(dft(v)) == pytest.approx(np.linalg.norm(v), rel=1e-12)
    assert np.linalg.norm(idft(v)) == pytest.approx(np.linalg.norm(v), rel=1e-12)
    assert_allclose(idft(dft(v)), v, atol=1e-12)


def test_power_of_two_check():
    assert is_power_of_two(256)
    assert not is_power_of_two(96)
    assert not is_power_of_two(0)


def test_convolution_identity_and_shift():
    rng = np.random.default_rng(2)
    v = _random_vector(rng, 16)
    assert_allclose(circular_convolve(v, unit_vector(16, 0)), v, atol=1e-12)
    for c in range(16):
        assert_allclose(circular_convolve(v, unit_vector(16, c)), circulant_shift(v, c), atol=1e-12)


def test_convolution_theorem_scale():
    rng = np.random.default_rng(3)
    a, b = _random_vector(rng, 32), _random_vector(rng, 32)
    direct = circular_convolve(a, b, method="direct")
    assert_allclose(circular_convolve(a, b, method="fft"), direct, atol=1e-10)
    assert_allclose(dft(direct), np.sqrt(32) * dft(a) * dft(b), atol=1e-10)


def test_convolution_length_mismatch():
    with pytest.raises(DimensionError):
        circular_convolve(np.ones(4), np.ones(5))


def test_circulant_shift_definition():
    assert_allclose(circulant_shift(np.array([1, 2, 3, 4]), 1), [4, 1, 2, 3])
    v = np.arange(5) + 0j
    assert_allclose(circulant_shift(v, 0), v)


def test_circulant_shift_keeps_spectrum_magnitude():
    rng = np.random.default_rng(4)
    v = _random_vector(rng, 16)
    for c in range(16):
        assert_allclose(np.abs(dft(circulant_shift(v, c))), np.abs(dft(v)), atol=1e-12)


@pytest.mark.parametrize("c", [-1, 4, 2.5])
def test_circulant_shift_out_of_range(c):
    with pytest.raises(ShiftIndexError):
        circulant_shift(np.ones(4), c)


def test_flip_conjugate_involution_and_fixed_point():
    rng = np.random.default_rng(5)
    v = _random_vector(rng, 9)
    assert_allclose(flip_conjugate(flip_conjugate(v)), v)
    even = np.array([3.0, 1.0, 2.0, 2.0, 1.0])
    assert_allclose(flip_conjugate(even), even)
    assert_allclose(flip_conjugate(np.array([1, 2j, 3, 4j])), [1, -4j, 3, -2j])


def test_flip_conjugate_conjugates_the_spectrum():
    rng = np.random.default_rng(6)
    v = _random_vector(rng, 32)
    assert_allclose(dft(flip_conjugate(v)), np.conj(dft(v)), atol=1e-12)


@pytest.mark.parametrize("bad", [np.zeros(0), np.ones((2, 2)), np.array([1.0, np.nan])])
def test_vector_validation(bad):
    with pytest.raises(DimensionError):
        as_complex_vector(bad)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
