"""
Complex-signal primitives shared by every estimator module.

Convention: U_N is the unitary DFT matrix whose columns are the on-grid
steering vectors, U_N[n, k] = exp(+j2*pi*n*k/N) / sqrt(N).
    dft(v)  = U_N^* v   (analysis, beamspace)
    idft(v) = U_N v     (synthesis)
"""
import logging
from typing import Literal

import numpy as np

from app.errors import DimensionError, ShiftIndexError

logger = logging.getLogger(__name__)

ConvolutionMethod = Literal["auto", "fft", "direct"]


def as_complex_vector(v, name: str = "vector") -> np.ndarray:
    """Coerce to a finite 1-D complex128 array of length >= 1"""
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < 1:
        raise DimensionError(f"{name} must have length >= 1")
    if not np.all(np.isfinite(arr)):
        raise DimensionError(f"{name} contains NaN or Inf entries")
    return arr


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def dft_matrix(n: int) -> np.ndarray:
    """Unitary U_N (synthesis direction)"""
    idx = np.arange(n)
    return np.exp(2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)


def dft(v) -> np.ndarray:
    """Beamspace transform U_N^* v; norm preserving"""
    v = as_complex_vector(v)
    if is_power_of_two(v.size):
        return np.fft.fft(v, norm="ortho")
    return dft_matrix(v.size).conj().T @ v


def idft(v) -> np.ndarray:
    """Exact inverse of dft, U_N v"""
    v = as_complex_vector(v)
    if is_power_of_two(v.size):
        return np.fft.ifft(v, norm="ortho")
    return dft_matrix(v.size) @ v


def circular_convolve(a, b, method: ConvolutionMethod = "auto") -> np.ndarray:
    """(a ⊛ b)[n] = sum_k a[k] b[<n-k>_N]"""
    a = as_complex_vector(a, "a")
    b = as_complex_vector(b, "b")
    if a.size != b.size:
        raise DimensionError(f"length mismatch: {a.size} vs {b.size}")
    n = a.size

    if method == "direct" or (method == "auto" and not is_power_of_two(n)):
        idx = np.arange(n)
        b_circ = b[(idx[:, None] - idx[None, :]) % n]
        return b_circ @ a

    # dft(a ⊛ b) = sqrt(N) dft(a) ⊙ dft(b) under the unitary convention
    return np.sqrt(n) * idft(dft(a) * dft(b))


def circulant_shift(v, c: int) -> np.ndarray:
    """out[i] = v[<i - c>_N]"""
    v = as_complex_vector(v)
    c_int = int(c)
    if c_int != c or not 0 <= c_int < v.size:
        raise ShiftIndexError(f"shift {c} outside [0, {v.size})")
    return np.roll(v, c_int)


def flip_conjugate(v) -> np.ndarray:
    """out[i] = conj(v[<-i>_N]); an involution"""
    v = as_complex_vector(v)
    return np.conj(np.roll(v[::-1], 1))


def unit_vector(n: int, index: int) -> np.ndarray:
    e = np.zeros(n, dtype=np.complex128)
    e[index] = 1.0
    return e
