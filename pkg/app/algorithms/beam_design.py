"""
In-sector base beam design.

A base beam f_b is obtained by inverting the spectral-mask relation
p = sqrt(N) U_N^* f_b^FC for a unit-modulus in-sector mask p, then scaled to
unit norm. Circulant shifts of f_b keep |DFT(f_b)| and therefore keep every
training beam focused on the sector.
"""
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, List

import numpy as np

from app.algorithms.dft_core import as_complex_vector, circulant_shift, dft, flip_conjugate, idft
from app.errors import ConfigurationError, DimensionError

if TYPE_CHECKING:
    from app.algorithms.sampling import ShiftSet

logger = logging.getLogger(__name__)

MASK_TOLERANCE = 1e-12
CANDIDATE_BATCH = 1000


@dataclass(frozen=True)
class Sector:
    """Contiguous beamspace band [d1, d2] of an N-dimensional beamspace"""
    d1: int
    d2: int
    n: int

    def __post_init__(self):
        if not 0 <= self.d1 < self.d2 < self.n:
            raise ConfigurationError(f"sector [{self.d1}, {self.d2}] invalid for N={self.n}")
        if self.n % self.n_sec != 0:
            raise ConfigurationError(
                f"sector width {self.n_sec} does not divide N={self.n}")

    @property
    def n_sec(self) -> int:
        return self.d2 - self.d1 + 1

    @property
    def rho(self) -> int:
        return self.n // self.n_sec

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.d1, self.d2 + 1)

    def contains(self, index: int) -> bool:
        return self.d1 <= index <= self.d2

    def to_dict(self) -> dict:
        return {"d1": self.d1, "d2": self.d2, "N": self.n, "N_sec": self.n_sec, "rho": self.rho}


def sector_tiling(n: int, n_sectors: int) -> List[Sector]:
    """Equal-width sectors tiling [N]"""
    if n_sectors < 1 or n % n_sectors != 0:
        raise ConfigurationError(f"N={n} is not divisible into {n_sectors} sectors")
    width = n // n_sectors
    if width < 2:
        raise ConfigurationError(f"{n_sectors} sectors leave fewer than 2 directions per sector")
    return [Sector(s * width, (s + 1) * width - 1, n) for s in range(n_sectors)]


@dataclass(frozen=True)
class SpectralMask:
    p: np.ndarray
    sector: Sector

    def __post_init__(self):
        p = as_complex_vector(self.p, "mask")
        if p.size != self.sector.n:
            raise DimensionError(f"mask length {p.size} != N={self.sector.n}")
        inside = np.zeros(p.size, dtype=bool)
        inside[self.sector.indices] = True
        if np.any(np.abs(p[~inside]) > MASK_TOLERANCE):
            raise ConfigurationError("spectral mask is nonzero outside the sector")
        if np.any(np.abs(np.abs(p[inside]) - 1.0) > MASK_TOLERANCE):
            raise ConfigurationError("spectral mask is not unit-modulus inside the sector")
        object.__setattr__(self, "p", p)

    @classmethod
    def from_phases(cls, sector: Sector, phases) -> "SpectralMask":
        phases = np.asarray(phases, dtype=float)
        if phases.size != sector.n_sec:
            raise DimensionError(f"expected {sector.n_sec} phases, got {phases.size}")
        p = np.zeros(sector.n, dtype=np.complex128)
        p[sector.indices] = np.exp(1j * phases)
        return cls(p, sector)


@dataclass(frozen=True)
class BaseBeam:
    f_b: np.ndarray
    mask: SpectralMask
    papr: float
    norm_factor: float

    @property
    def sector(self) -> Sector:
        return self.mask.sector

    @property
    def effective_mask(self) -> np.ndarray:
        """p_eff = norm_factor * p, the mask realised by the unit-norm beam"""
        return self.norm_factor * self.mask.p


def papr(v) -> float:
    """Peak-to-average power ratio over the antenna weights"""
    power = np.abs(as_complex_vector(v)) ** 2
    mean = power.mean()
    if mean == 0:
        raise ConfigurationError("PAPR undefined for an all-zero beam")
    return float(power.max() / mean)


def random_mask(sector: Sector, rng: np.random.Generator) -> SpectralMask:
    """Unit-modulus mask on the sector with i.i.d. uniform phases"""
    return SpectralMask.from_phases(sector, rng.uniform(0.0, 2.0 * np.pi, size=sector.n_sec))


def mask_to_base_beam(mask: SpectralMask) -> BaseBeam:
    n = mask.sector.n
    f_fc = idft(mask.p) / np.sqrt(n)
    # ||f_fc||^2 = N_sec / N; scale by sqrt(rho) for a unit-norm transmit beam
    norm_factor = float(np.sqrt(mask.sector.rho))
    f_b = norm_factor * flip_conjugate(f_fc)
    return BaseBeam(f_b=f_b, mask=mask, papr=papr(f_b), norm_factor=norm_factor)


def select_base_beam(sector: Sector, n_candidates: int, rng: np.random.Generator) -> BaseBeam:
    """Lowest-PAPR base beam among `n_candidates` random masks (first minimum wins)"""
    if n_candidates < 1:
        raise ConfigurationError(f"n_candidates must be >= 1, got {n_candidates}")

    n = sector.n
    best_phases = None
    best_papr = np.inf
    remaining = n_candidates
    while remaining > 0:
        batch = min(CANDIDATE_BATCH, remaining)
        # row-major draw keeps the candidate stream identical to repeated random_mask calls
        phases = rng.uniform(0.0, 2.0 * np.pi, size=(batch, sector.n_sec))
        masks = np.zeros((batch, n), dtype=np.complex128)
        masks[:, sector.indices] = np.exp(1j * phases)
        # |f_b| is a permutation of |f_fc|, so PAPR can be read off f_fc directly
        power = np.abs(np.fft.ifft(masks, axis=1, norm="ortho")) ** 2
        ratios = power.max(axis=1) / power.mean(axis=1)
        i = int(np.argmin(ratios))
        if ratios[i] < best_papr:
            best_papr = float(ratios[i])
            best_phases = phases[i]
        remaining -= batch

    beam = mask_to_base_beam(SpectralMask.from_phases(sector, best_phases))
    logger.info(f"🎯 Base beam for sector [{sector.d1}, {sector.d2}]: "
                f"PAPR={beam.papr:.3f} from {n_candidates} candidates")
    return beam


def beam_ensemble(base: BaseBeam, shifts: "ShiftSet") -> np.ndarray:
    """Rows are f_m = circulant_shift(f_b, c[m])"""
    if shifts.n != base.sector.n:
        raise DimensionError(f"shift set is for N={shifts.n}, beam has N={base.sector.n}")
    return np.array([circulant_shift(base.f_b, c) for c in shifts.shifts])


def in_sector_energy(beam, sector: Sector) -> float:
    """Spectral energy of `beam` on the sector's beamspace indices"""
    spectrum = dft(beam)
    return float(np.sum(np.abs(spectrum[sector.indices]) ** 2))


def out_of_sector_energy(beam, sector: Sector) -> float:
    spectrum = dft(beam)
    outside = np.ones(spectrum.size, dtype=bool)
    outside[sector.indices] = False
    return float(np.sum(np.abs(spectrum[outside]) ** 2))
