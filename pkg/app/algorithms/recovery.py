"""
In-sector measurement simulation and sparse recovery (OMP)
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from app.algorithms.beam_design import BaseBeam, Sector, beam_ensemble
from app.algorithms.dft_core import as_complex_vector, circular_convolve, dft, flip_conjugate, idft
from app.algorithms.sampling import ShiftSet
from app.errors import ConfigurationError, DimensionError, SingularMaskError

logger = logging.getLogger(__name__)

PINV_RCOND = 1e-10
MASK_FLOOR = 1e-9


@dataclass(frozen=True)
class SensingMatrix:
    a_l: np.ndarray        # M x N_sec, column j = U_N[Omega, d1 + j]
    shifts: ShiftSet
    sector: Sector


@dataclass(frozen=True)
class SparseEstimate:
    support: Tuple[int, ...]
    values: np.ndarray
    residual_norm: float

    def to_dense(self, length: int) -> np.ndarray:
        x = np.zeros(length, dtype=np.complex128)
        if self.support:
            x[list(self.support)] = self.values
        return x


def build_sensing_matrix(shifts: ShiftSet, sector: Sector) -> SensingMatrix:
    if shifts.n != sector.n:
        raise ConfigurationError(f"shift set is for N={shifts.n}, sector for N={sector.n}")
    rows = np.array(shifts.shifts)[:, None]
    cols = sector.indices[None, :]
    a_l = np.exp(2j * np.pi * rows * cols / sector.n) / np.sqrt(sector.n)
    return SensingMatrix(a_l=a_l, shifts=shifts, sector=sector)


def complex_noise(size: int, noise_std: float, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. CN(0, noise_std^2)"""
    if noise_std < 0:
        raise ConfigurationError(f"noise_std must be >= 0, got {noise_std}")
    if noise_std == 0:
        return np.zeros(size, dtype=np.complex128)
    return noise_std / np.sqrt(2.0) * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def measure(beams: np.ndarray, h, noise_std: float, rng: Optional[np.random.Generator]) -> np.ndarray:
    """y[m] = <h, f_m> + n[m] for arbitrary training beams (rows of `beams`)"""
    h = as_complex_vector(h, "h")
    beams = np.atleast_2d(beams)
    if beams.shape[1] != h.size:
        raise DimensionError(f"beams have length {beams.shape[1]}, channel has {h.size}")
    y = beams.conj() @ h
    if noise_std > 0:
        y = y + complex_noise(y.size, noise_std, rng)
    return y


def measurements_inner_product(h, base: BaseBeam, shifts: ShiftSet) -> np.ndarray:
    """Noiseless y[m] = f_m^* h"""
    return measure(beam_ensemble(base, shifts), h, 0.0, None)


def measurements_convolution(h, base: BaseBeam, shifts: ShiftSet) -> np.ndarray:
    """Noiseless y = P_Omega(h ⊛ f_b^FC)"""
    conv = circular_convolve(h, flip_conjugate(base.f_b))
    return conv[list(shifts.shifts)]


def measurements_masked_dft(h, base: BaseBeam, shifts: ShiftSet) -> np.ndarray:
    """Noiseless y = P_Omega(U_N x) with x = g ⊙ p_eff"""
    x = dft(h) * base.effective_mask
    return idft(x)[list(shifts.shifts)]


def simulate_measurements(h, base: BaseBeam, shifts: ShiftSet, noise_std: float,
                          rng: Optional[np.random.Generator]) -> np.ndarray:
    h = as_complex_vector(h, "h")
    if h.size != base.sector.n or shifts.n != h.size:
        raise DimensionError(f"channel length {h.size}, beam N={base.sector.n}, shifts N={shifts.n}")
    y = measurements_inner_product(h, base, shifts)
    return y + complex_noise(y.size, noise_std, rng)


def omp(y, a: np.ndarray, max_sparsity: int, residual_tol: float,
        allowed: Optional[np.ndarray] = None) -> SparseEstimate:
    """
    Orthogonal matching pursuit.

    Column scores are |a_j^* r| / ||a_j||; the largest wins with ties going to
    the lowest index. Columns outside `allowed` are never selected. Stops after
    `max_sparsity` atoms or once ||r|| <= residual_tol * ||y||.
    """
    y = np.asarray(y, dtype=np.complex128)
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != y.size:
        raise DimensionError(f"matrix shape {a.shape} does not match {y.size} measurements")
    if max_sparsity < 0 or max_sparsity > min(a.shape):
        raise ConfigurationError(f"max_sparsity={max_sparsity} outside [0, {min(a.shape)}]")

    norms = np.linalg.norm(a, axis=0)
    selectable = norms > 0
    if allowed is not None:
        selectable &= np.asarray(allowed, dtype=bool)
    safe_norms = np.where(norms > 0, norms, 1.0)

    y_norm = float(np.linalg.norm(y))
    residual = y.copy()
    support = []
    coeffs = np.zeros(0, dtype=np.complex128)

    while len(support) < max_sparsity:
        if np.linalg.norm(residual) <= residual_tol * y_norm:
            break
        scores = np.abs(a.conj().T @ residual) / safe_norms
        scores[~selectable] = -np.inf
        j = int(np.argmax(scores))
        if not np.isfinite(scores[j]) or scores[j] <= 0:
            break
        support.append(j)
        selectable[j] = False

        a_s = a[:, support]
        coeffs = np.linalg.pinv(a_s, rcond=PINV_RCOND) @ y
        if np.linalg.matrix_rank(a_s, tol=PINV_RCOND * np.linalg.norm(a_s, 2)) < len(support):
            logger.warning(f"⚠️ OMP support of size {len(support)} is rank deficient; using pseudoinverse")
        residual = y - a_s @ coeffs

    return SparseEstimate(support=tuple(support), values=coeffs,
                          residual_norm=float(np.linalg.norm(residual)))


def demask(x_hat: SparseEstimate, base: BaseBeam, sector: Sector) -> np.ndarray:
    """g_L[j] = x_L[j] conj(p_eff[d1 + j]) / |p_eff[d1 + j]|^2"""
    x_l = x_hat.to_dense(sector.n_sec)
    p_l = base.effective_mask[sector.indices]
    magnitude = np.abs(p_l) ** 2
    if x_hat.support:
        support = list(x_hat.support)
        if np.any(np.sqrt(magnitude[support]) < MASK_FLOOR):
            raise SingularMaskError("effective mask vanishes on the recovered support")
    safe = np.where(magnitude > 0, magnitude, 1.0)
    return x_l * p_l.conj() / safe


def reconstruct_channel(g_hat_l, sector: Sector) -> np.ndarray:
    """h = [U_N]_L g_L"""
    g_hat_l = as_complex_vector(g_hat_l, "g_hat_L")
    if g_hat_l.size != sector.n_sec:
        raise DimensionError(f"expected {sector.n_sec} in-sector coefficients, got {g_hat_l.size}")
    g = np.zeros(sector.n, dtype=np.complex128)
    g[sector.indices] = g_hat_l
    return idft(g)


def recover_in_sector(y, base: BaseBeam, shifts: ShiftSet, max_sparsity: int,
                      residual_tol: float) -> Tuple[np.ndarray, SparseEstimate]:
    """Grid pipeline: OMP on A_L, then de-masking; returns (g_hat_L, x_hat)"""
    sector = base.sector
    sensing = build_sensing_matrix(shifts, sector)
    x_hat = omp(y, sensing.a_l, max_sparsity, residual_tol)
    return demask(x_hat, base, sector), x_hat


def oversampled_dictionary(n: int, oversampling: int) -> np.ndarray:
    """N x (oversampling N) steering vectors at sin(theta) spacing 2 / (oversampling N), unit norm"""
    if oversampling < 1:
        raise ConfigurationError(f"oversampling must be >= 1, got {oversampling}")
    grid = np.arange(oversampling * n)
    return np.exp(2j * np.pi * np.outer(np.arange(n), grid) / (oversampling * n)) / np.sqrt(n)


def sector_window(sector: Sector, oversampling: int) -> np.ndarray:
    window = np.zeros(oversampling * sector.n, dtype=bool)
    window[oversampling * sector.d1: oversampling * (sector.d2 + 1)] = True
    return window


def omp_oversampled(y, beams: np.ndarray, oversampling: int, sector: Sector, max_sparsity: int,
                    residual_tol: float, return_estimate: bool = False):
    """OMP over F D with the in-sector window applied to every selection; returns h = D g_win"""
    beams = np.atleast_2d(np.asarray(beams, dtype=np.complex128))
    if beams.shape[1] != sector.n:
        raise DimensionError(f"beams have length {beams.shape[1]}, sector N={sector.n}")
    dictionary = oversampled_dictionary(sector.n, oversampling)
    cs_matrix = beams.conj() @ dictionary
    estimate = omp(y, cs_matrix, max_sparsity, residual_tol, allowed=sector_window(sector, oversampling))
    h_hat = dictionary @ estimate.to_dense(dictionary.shape[1])
    if return_estimate:
        return h_hat, estimate
    return h_hat
