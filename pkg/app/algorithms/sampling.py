"""
Circulant-shift sampling patterns and their point spread function.

The Gram matrix of A = S U_N is circulant, G = U_N^* Diag(b) U_N, with first
row PSF = U_N b / sqrt(N). The in-sector coherence only looks at the PSF lags
1 .. d2 - d1, which is why a stride-rho pattern (PSF nonzero only at lags that
are multiples of N_sec) is aliasing-free inside the sector.
"""
import enum
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Tuple, Union

import numpy as np

from app.algorithms.beam_design import Sector
from app.algorithms.dft_core import dft_matrix, idft
from app.errors import ConfigurationError, DimensionError

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_N = 24
TIE_TOLERANCE = 1e-12


class Scheme(enum.Enum):
    """Training schemes; PCS and RCS are circulant-shift constructions"""
    PCS = "pcs"
    RCS = "rcs"
    GREEDY = "greedy"
    GENIE = "genie"


@dataclass(frozen=True)
class ShiftSet:
    shifts: Tuple[int, ...]
    n: int

    def __post_init__(self):
        shifts = tuple(int(c) for c in self.shifts)
        if len(shifts) < 1:
            raise ConfigurationError("a shift set needs at least one shift")
        if len(set(shifts)) != len(shifts):
            raise ConfigurationError(f"shifts are not distinct: {shifts}")
        if any(not 0 <= c < self.n for c in shifts):
            raise ConfigurationError(f"shifts must lie in [0, {self.n})")
        object.__setattr__(self, "shifts", shifts)

    @property
    def m(self) -> int:
        return len(self.shifts)

    def __iter__(self):
        return iter(self.shifts)


@dataclass(frozen=True)
class SamplingIndicator:
    b: np.ndarray

    @property
    def m(self) -> int:
        return int(round(float(np.sum(self.b.real))))


@dataclass(frozen=True)
class PsfReport:
    psf: np.ndarray
    mu: float
    argmax_index: int


@dataclass(frozen=True)
class BruteForceResult:
    min_mu: float
    best_shifts: ShiftSet
    n_ties: int
    n_sets: int


def _check_divisor(n: int, n_sec: int):
    if n_sec < 1 or n % n_sec != 0:
        raise ConfigurationError(f"N_sec={n_sec} does not divide N={n}")


def uniform_shifts(n: int, n_sec: int) -> ShiftSet:
    """{0, rho, 2 rho, ..., (N_sec - 1) rho}: mu = 0 on any width-N_sec sector"""
    _check_divisor(n, n_sec)
    rho = n // n_sec
    return ShiftSet(tuple(range(0, n, rho)), n)


def pcs_shifts(n: int, n_sec: int, m: int, rng: np.random.Generator) -> ShiftSet:
    """M shifts drawn without replacement from the uniform parent set"""
    _check_divisor(n, n_sec)
    if not 1 <= m <= n_sec:
        raise ConfigurationError(f"PCS needs 1 <= M <= N_sec, got M={m}, N_sec={n_sec}")
    parent = np.array(uniform_shifts(n, n_sec).shifts)
    picked = rng.choice(parent, size=m, replace=False)
    return ShiftSet(tuple(sorted(int(c) for c in picked)), n)


def rcs_shifts(n: int, m: int, rng: np.random.Generator) -> ShiftSet:
    """M shifts drawn uniformly without replacement from [N]"""
    if not 1 <= m <= n:
        raise ConfigurationError(f"RCS needs 1 <= M <= N, got M={m}, N={n}")
    picked = rng.choice(n, size=m, replace=False)
    return ShiftSet(tuple(sorted(int(c) for c in picked)), n)


def indicator(shifts: ShiftSet) -> SamplingIndicator:
    b = np.zeros(shifts.n, dtype=np.complex128)
    b[list(shifts.shifts)] = 1.0
    return SamplingIndicator(b)


def psf(b: SamplingIndicator) -> np.ndarray:
    """PSF = U_N b / sqrt(N); PSF[0] = M / N"""
    return idft(b.b) / np.sqrt(b.b.size)


def _check_sector(shifts: ShiftSet, sector: Sector):
    if shifts.n != sector.n:
        raise DimensionError(f"shift set is for N={shifts.n}, sector for N={sector.n}")


def psf_report(shifts: ShiftSet, sector: Sector) -> PsfReport:
    _check_sector(shifts, sector)
    values = psf(indicator(shifts))
    lags = np.abs(values[1:sector.d2 - sector.d1 + 1])
    i = int(np.argmax(lags))
    return PsfReport(psf=values, mu=float(lags[i]), argmax_index=i + 1)


def coherence(shifts: ShiftSet, sector: Sector) -> float:
    """max |PSF[i]| over i in {1, ..., d2 - d1}"""
    return psf_report(shifts, sector).mu


def normalized_coherence(shifts: ShiftSet, sector: Sector) -> float:
    """mu divided by the squared column norm M / N"""
    return coherence(shifts, sector) / (shifts.m / shifts.n)


def explicit_gram(shifts: ShiftSet) -> np.ndarray:
    """A^* A with A = S U_N built explicitly"""
    a = dft_matrix(shifts.n)[list(shifts.shifts), :]
    return a.conj().T @ a


def gram_from_psf(psf_values) -> np.ndarray:
    """Circulant matrix with first row PSF: G[i, j] = PSF[<j - i>_N]"""
    psf_values = np.asarray(psf_values, dtype=np.complex128)
    n = psf_values.size
    idx = np.arange(n)
    return psf_values[(idx[None, :] - idx[:, None]) % n]


def _draw_shifts(scheme: Scheme, n: int, n_sec: int, m: int, rng: np.random.Generator) -> ShiftSet:
    if scheme == Scheme.PCS:
        return pcs_shifts(n, n_sec, m, rng)
    if scheme == Scheme.RCS:
        return rcs_shifts(n, m, rng)
    raise ConfigurationError(f"{scheme.value} is not a circulant-shift scheme")


def coherence_draws(scheme: Scheme, n: int, n_sec: int, m: int, trials: int,
                    rng: Union[int, np.random.Generator], threads: int = 1) -> np.ndarray:
    """mu of each draw in trial order; trial t uses seed base_seed + t"""
    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    base_seed = int(rng.integers(0, 2**31 - 1)) if isinstance(rng, np.random.Generator) else int(rng)
    sector = Sector(0, n_sec - 1, n)

    def one(trial: int) -> float:
        shifts = _draw_shifts(scheme, n, n_sec, m, np.random.default_rng(base_seed + trial))
        return coherence(shifts, sector)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(one, range(trials)))
    else:
        values = [one(t) for t in range(trials)]

    return np.array(values)


def coherence_cdf(scheme: Scheme, n: int, n_sec: int, m: int, trials: int,
                  rng: Union[int, np.random.Generator], threads: int = 1) -> np.ndarray:
    """Sorted mu over `trials` independent draws"""
    mus = np.sort(coherence_draws(scheme, n, n_sec, m, trials, rng, threads))
    logger.info(f"📊 {scheme.value.upper()} coherence CDF (N={n}, N_sec={n_sec}, M={m}): "
                f"median mu={np.median(mus):.4f} over {trials} draws")
    return mus


def brute_force_optimum(n: int, sector: Sector, m: int, chunk: int = 20000) -> BruteForceResult:
    """Exhaustive search of the coherence minimisation over all C(N, M) shift sets"""
    if n > BRUTE_FORCE_MAX_N:
        raise ConfigurationError(f"brute force is limited to N <= {BRUTE_FORCE_MAX_N}")
    if sector.n != n or not 1 <= m <= n:
        raise ConfigurationError(f"invalid brute-force problem N={n}, M={m}, sector N={sector.n}")

    width = sector.d2 - sector.d1
    best_mu = np.inf
    best_set = None
    n_ties = 0
    combos = itertools.combinations(range(n), m)
    while True:
        block = np.array(list(itertools.islice(combos, chunk)), dtype=int)
        if block.size == 0:
            break
        b = np.zeros((block.shape[0], n))
        np.put_along_axis(b, block, 1.0, axis=1)
        # ifft without normalisation is exactly U_N b / sqrt(N)
        mus = np.abs(np.fft.ifft(b, axis=1)[:, 1:width + 1]).max(axis=1)
        block_min = float(mus.min())
        if block_min < best_mu - TIE_TOLERANCE:
            best_mu = block_min
            best_set = block[int(np.argmin(mus))]
            n_ties = int(np.sum(mus <= best_mu + TIE_TOLERANCE))
        elif block_min <= best_mu + TIE_TOLERANCE:
            n_ties += int(np.sum(mus <= best_mu + TIE_TOLERANCE))

    total = comb(n, m)
    logger.info(f"🔎 Brute force N={n}, M={m}: min mu={best_mu:.3e}, {n_ties} optimal sets of {total}")
    return BruteForceResult(min_mu=best_mu, best_shifts=ShiftSet(tuple(best_set), n),
                            n_ties=n_ties, n_sets=total)
