"""
In-sector channel estimation experiments
SLS sector selection, SNR calibration, benchmark training schemes and
Monte-Carlo NMSE / achievable-rate evaluation
"""
import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.algorithms.beam_design import (
    BaseBeam, Sector, beam_ensemble, sector_tiling, select_base_beam,
)
from app.algorithms.channel import ChannelScenarioConfig, sample_scenario, synthesize_channel
from app.algorithms.dft_core import as_complex_vector, dft
from app.algorithms.recovery import (
    measure, omp_oversampled, reconstruct_channel, recover_in_sector, simulate_measurements,
)
from app.algorithms.sampling import Scheme, ShiftSet, coherence, pcs_shifts, rcs_shifts, uniform_shifts
from app.errors import CalibrationError, ConfigurationError, InSectorError, TrialError, UndefinedMetricError

logger = logging.getLogger(__name__)

CHANNEL_STREAM = 0
SCHEME_STREAM = 1
NOISE_STREAM = 2
BEAM_STREAM = 2**32 - 1
NOISELESS_RESIDUAL_TOL = 1e-6

T = TypeVar("T")
R = TypeVar("R")


def snr_linear(snr_db: float) -> float:
    """10^(snr_db / 10), rejecting SNRs with no finite, nonzero linear value"""
    if snr_db is None or np.isnan(snr_db):
        raise ConfigurationError(f"snr_db must be a number, got {snr_db}")
    with np.errstate(over="ignore", under="ignore"):
        linear = float(np.power(10.0, snr_db / 10))
    if not 0 < linear < np.inf:
        raise ConfigurationError(f"snr_db={snr_db} is outside the representable range")
    return linear


class SnrReference(enum.Enum):
    sector = "sector"   # uniform convolutional ensemble of the selected sector
    scheme = "scheme"   # the scheme's own training beams


class OmpConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    max_sparsity: int = Field(0, ge=0)      # 0 = known K
    residual_tol: float = -1.0              # negative = 1e-6 noiseless, 0 under noise
    oversampling: int = Field(1, ge=1)


class ExperimentConfig(BaseModel):
    """Full parameterisation of a Monte-Carlo run"""
    model_config = ConfigDict(extra="forbid")

    n_antennas: int = Field(256, ge=2)
    n_sectors: int = Field(4, ge=1)
    m: int = Field(25, ge=1)
    snr_db: Optional[float] = 5.0           # None = noiseless
    trials: int = Field(100, ge=1)
    scheme: Scheme = Scheme.PCS
    channel: ChannelScenarioConfig = Field(default_factory=ChannelScenarioConfig)
    in_sector: bool = True
    target_sector: int = Field(0, ge=0)
    omp: OmpConfig = Field(default_factory=OmpConfig)
    n_mask_candidates: int = Field(5000, ge=1)
    pool_factor: int = Field(30, ge=1)
    snr_reference: SnrReference = SnrReference.sector
    seed: int = Field(0, ge=0)
    m_values: Optional[List[int]] = None
    snr_values: Optional[List[Optional[float]]] = None
    schemes: Optional[List[Scheme]] = None
    cdf_trials: int = Field(1000, ge=1)

    @model_validator(mode="after")
    def _check(self):
        if self.n_antennas % self.n_sectors != 0:
            raise ConfigurationError(f"N={self.n_antennas} is not divisible by n_sectors={self.n_sectors}")
        if self.n_antennas // self.n_sectors < 2:
            raise ConfigurationError("sectors must span at least 2 beamspace directions")
        if self.channel.n_antennas != self.n_antennas:
            raise ConfigurationError(
                f"channel.n_antennas={self.channel.n_antennas} differs from n_antennas={self.n_antennas}")
        if self.target_sector >= self.n_sectors:
            raise ConfigurationError(f"target_sector={self.target_sector} >= n_sectors={self.n_sectors}")
        n_sec = self.n_sec
        for m in self.m_values or [self.m]:
            if m > self.n_antennas:
                raise ConfigurationError(f"M={m} exceeds N={self.n_antennas}")
            for scheme in self.schemes or [self.scheme]:
                if scheme == Scheme.PCS and m > n_sec:
                    raise ConfigurationError(f"PCS needs M <= N_sec={n_sec}, got M={m}")
        for snr in [self.snr_db] + list(self.snr_values or []):
            if snr is not None and snr != np.inf:
                snr_linear(snr)
        return self

    @property
    def n_sec(self) -> int:
        return self.n_antennas // self.n_sectors

    @property
    def rho(self) -> int:
        return self.n_sectors

    def sectors(self) -> List[Sector]:
        return sector_tiling(self.n_antennas, self.n_sectors)

    def scenario(self) -> ChannelScenarioConfig:
        """Channel population; restricted to the target sector's band in in-sector mode"""
        band = None
        if self.in_sector:
            s = self.sectors()[self.target_sector]
            band = (s.d1, s.d2)
        return self.channel.model_copy(update={"band": band, "rng_seed": self.seed})

    def noiseless(self) -> bool:
        return self.snr_db is None or self.snr_db == np.inf


@dataclass
class TrialRecord:
    trial_index: int
    selected_sector: int
    nmse_numerator: float
    nmse_denominator: float
    rate_bits: float
    mu: float
    true_sector: int = 0
    n_measurements: int = 0

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass
class ExperimentSummary:
    scheme: str
    n: int
    n_sec: int
    m: int
    snr_db: Optional[float]
    trials: int
    nmse: float
    mean_rate_bits: float
    mean_mu: float
    median_mu: float
    max_mu: float
    mis_selections: int
    noise_std: float

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: List[TrialRecord]
    summary: ExperimentSummary


@dataclass
class Training:
    """Beams used for one in-sector acquisition"""
    scheme: Scheme
    sector: Sector
    beams: np.ndarray                     # rows f_m
    mu: float
    base: Optional[BaseBeam] = None
    shifts: Optional[ShiftSet] = None


@dataclass
class TrialOutcome:
    record: TrialRecord
    g_l: np.ndarray
    g_hat_l: np.ndarray
    h_hat: np.ndarray
    support: Tuple[int, ...] = field(default_factory=tuple)


# ── Metrics ──────────────────────────────────────────────────────────────────

def sls_select_sector(h, sector_beams: Sequence[BaseBeam]) -> int:
    """Sector whose base beam receives the most power; lowest index on ties"""
    h = as_complex_vector(h, "h")
    powers = np.array([np.abs(np.vdot(beam.f_b, h)) ** 2 for beam in sector_beams])
    return int(np.argmax(powers))


def strongest_sector(g, sectors: Sequence[Sector]) -> int:
    """Sector holding the most beamspace energy of the true channel"""
    energy = [float(np.sum(np.abs(g[s.indices]) ** 2)) for s in sectors]
    return int(np.argmax(energy))


def noise_std_from_energy(mean_energy_per_measurement: float, snr_db: float) -> float:
    if mean_energy_per_measurement <= 0:
        raise CalibrationError("cannot calibrate noise against an all-zero channel sample")
    return float(np.sqrt(mean_energy_per_measurement / snr_linear(snr_db)))


def noise_std_for_snr(beams, channels: Sequence, snr_db: float) -> float:
    """
    sigma with SNR = E[||F h||^2] / (M sigma^2), the expectation taken over
    `channels`. `beams` is one (M, N) beam matrix shared by every channel or
    a sequence holding one beam matrix per channel.
    """
    if len(channels) == 0:
        raise CalibrationError("empty channel sample")
    shared = isinstance(beams, np.ndarray) and beams.ndim == 2
    per_channel = [beams] * len(channels) if shared else list(beams)
    if len(per_channel) != len(channels):
        raise ConfigurationError("need one beam set per channel")

    energies = [np.sum(np.abs(np.atleast_2d(f).conj() @ as_complex_vector(h)) ** 2) / np.atleast_2d(f).shape[0]
                for f, h in zip(per_channel, channels)]
    return noise_std_from_energy(float(np.mean(energies)), snr_db)


def nmse(records: Sequence[TrialRecord]) -> float:
    """E[||g_L - g_hat_L||^2] / E[||g_L||^2] as a ratio of sums"""
    if not records:
        raise UndefinedMetricError("no trial records")
    numerator = float(np.sum([r.nmse_numerator for r in records]))
    denominator = float(np.sum([r.nmse_denominator for r in records]))
    if denominator <= 0:
        raise UndefinedMetricError("NMSE undefined: the in-sector channel energy is zero")
    return numerator / denominator


def achievable_rate(h_hat, h, noise_var: float) -> float:
    """log2(1 + |<h, h_hat / ||h_hat||>|^2 / sigma^2) with MRT along h_hat"""
    h_hat = as_complex_vector(h_hat, "h_hat")
    h = as_complex_vector(h, "h")
    if noise_var <= 0:
        raise ConfigurationError(f"noise variance must be positive, got {noise_var}")
    norm = np.linalg.norm(h_hat)
    if norm == 0:
        logger.warning("⚠️ Zero channel estimate: no beamforming gain, rate set to 0")
        return 0.0
    gain = np.abs(np.vdot(h_hat / norm, h)) ** 2
    return float(np.log2(1.0 + gain / noise_var))


def effective_coherence(beams: np.ndarray, sector: Sector) -> float:
    """
    Column-normalised coherence of F [U_N]_L scaled by M / N, which puts
    arbitrary beam sets on the same scale as the PSF coherence of PCS/RCS.
    """
    beams = np.atleast_2d(beams)
    m, n = beams.shape
    b = beams.conj() @ np.exp(2j * np.pi * np.outer(np.arange(n), sector.indices) / n) / np.sqrt(n)
    norms = np.linalg.norm(b, axis=0)
    b = b / np.where(norms > 0, norms, 1.0)
    gram = np.abs(b.conj().T @ b)
    np.fill_diagonal(gram, 0.0)
    return float(gram.max() * m / n)


# ── Training schemes ─────────────────────────────────────────────────────────

def greedy_benchmark_beams(sector: Sector, m: int, pool_factor: int,
                           rng: np.random.Generator) -> np.ndarray:
    """Top-M of pool_factor * M random unit-norm beams by in-sector spectral energy"""
    if pool_factor < 1:
        raise ConfigurationError(f"pool_factor must be >= 1, got {pool_factor}")
    n = sector.n
    pool = rng.standard_normal((pool_factor * m, n)) + 1j * rng.standard_normal((pool_factor * m, n))
    pool /= np.linalg.norm(pool, axis=1, keepdims=True)
    spectra = np.fft.fft(pool, axis=1, norm="ortho")
    scores = np.sum(np.abs(spectra[:, sector.indices]) ** 2, axis=1)
    order = np.argsort(-scores, kind="stable")[:m]
    return pool[order]


def genie_beams(sector: Sector) -> np.ndarray:
    """Directional DFT beams of every in-sector direction"""
    n = sector.n
    return np.exp(2j * np.pi * np.outer(sector.indices, np.arange(n)) / n) / np.sqrt(n)


def build_training(scheme: Scheme, base: BaseBeam, m: int, pool_factor: int,
                   rng: np.random.Generator) -> Training:
    sector = base.sector
    if scheme in (Scheme.PCS, Scheme.RCS):
        if scheme == Scheme.PCS:
            shifts = pcs_shifts(sector.n, sector.n_sec, m, rng)
        else:
            shifts = rcs_shifts(sector.n, m, rng)
        return Training(scheme, sector, beam_ensemble(base, shifts), coherence(shifts, sector),
                        base=base, shifts=shifts)
    if scheme == Scheme.GREEDY:
        beams = greedy_benchmark_beams(sector, m, pool_factor, rng)
        return Training(scheme, sector, beams, effective_coherence(beams, sector))
    beams = genie_beams(sector)
    return Training(scheme, sector, beams, 0.0)


def reference_beams(training: Training, base: BaseBeam, reference: SnrReference) -> np.ndarray:
    if reference == SnrReference.scheme:
        return training.beams
    return beam_ensemble(base, uniform_shifts(base.sector.n, base.sector.n_sec))


@lru_cache(maxsize=32)
def design_sector_beams(n: int, n_sectors: int, n_candidates: int, seed: int) -> Tuple[BaseBeam, ...]:
    """One lowest-PAPR base beam per sector, shared by SLS and in-sector training"""
    rng = np.random.default_rng((seed, BEAM_STREAM))
    return tuple(select_base_beam(s, n_candidates, rng) for s in sector_tiling(n, n_sectors))


def _trial_rng(seed: int, trial: int, stream: int) -> np.random.Generator:
    return np.random.default_rng((seed, trial, stream))


def _omp_limits(config: ExperimentConfig, m: int, n_columns: int, noiseless: bool) -> Tuple[int, float]:
    sparsity = config.omp.max_sparsity or config.channel.k_rays
    sparsity = max(1, min(sparsity, m, n_columns))
    tol = config.omp.residual_tol
    if tol < 0:
        tol = NOISELESS_RESIDUAL_TOL if noiseless else 0.0
    return sparsity, tol


def recover(training: Training, y: np.ndarray, config: ExperimentConfig,
            noiseless: bool) -> Tuple[np.ndarray, np.ndarray, Tuple[int, ...]]:
    """In-sector recovery for any scheme; returns (g_hat_L, h_hat, support)"""
    sector = training.sector
    if training.scheme == Scheme.GENIE:
        return y.copy(), reconstruct_channel(y, sector), tuple(range(sector.n_sec))

    m = training.beams.shape[0]
    oversampling = config.omp.oversampling
    if training.shifts is not None and oversampling == 1:
        sparsity, tol = _omp_limits(config, m, sector.n_sec, noiseless)
        g_hat_l, x_hat = recover_in_sector(y, training.base, training.shifts, sparsity, tol)
        return g_hat_l, reconstruct_channel(g_hat_l, sector), x_hat.support

    sparsity, tol = _omp_limits(config, m, sector.n_sec * oversampling, noiseless)
    h_hat, estimate = omp_oversampled(y, training.beams, oversampling, sector, sparsity, tol,
                                      return_estimate=True)
    g_hat_l = dft(h_hat)[sector.indices]
    return g_hat_l, h_hat, estimate.support


def _map(func: Callable[[T], R], items: Sequence[T], threads: int) -> List[R]:
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]


@dataclass
class _PreparedTrial:
    index: int
    h: np.ndarray
    g: np.ndarray
    selected: int
    true_sector: int
    training: Training
    energy_per_measurement: float


def run_trials(config: ExperimentConfig, threads: int = 1) -> Tuple[List[TrialOutcome], float]:
    """
    Two passes: sample channels and training first, calibrate the noise level
    on that population, then measure and recover. Returns outcomes and sigma.
    """
    sectors = config.sectors()
    sector_beams = design_sector_beams(config.n_antennas, config.n_sectors,
                                       config.n_mask_candidates, config.seed)
    scenario = config.scenario()
    noiseless = config.noiseless()

    def prepare(t: int) -> _PreparedTrial:
        try:
            h = synthesize_channel(sample_scenario(scenario, _trial_rng(config.seed, t, CHANNEL_STREAM)),
                                   config.n_antennas)
            g = dft(h)
            selected = sls_select_sector(h, sector_beams)
            base = sector_beams[selected]
            training = build_training(config.scheme, base, config.m, config.pool_factor,
                                      _trial_rng(config.seed, t, SCHEME_STREAM))
            ref = reference_beams(training, base, config.snr_reference)
            energy = float(np.sum(np.abs(ref.conj() @ h) ** 2) / ref.shape[0])
            return _PreparedTrial(t, h, g, selected, strongest_sector(g, sectors), training, energy)
        except InSectorError as e:
            raise TrialError(t, e, config.scheme.value) from e

    prepared = _map(prepare, list(range(config.trials)), threads)

    if noiseless:
        sigma = 0.0
    else:
        sigma = noise_std_from_energy(float(np.mean([p.energy_per_measurement for p in prepared])),
                                      config.snr_db)

    def execute(p: _PreparedTrial) -> TrialOutcome:
        try:
            noise_rng = _trial_rng(config.seed, p.index, NOISE_STREAM)
            training = p.training
            if training.shifts is not None:
                y = simulate_measurements(p.h, training.base, training.shifts, sigma, noise_rng)
            else:
                y = measure(training.beams, p.h, sigma, noise_rng)
            g_hat_l, h_hat, support = recover(training, y, config, noiseless)

            g_l = p.g[training.sector.indices]
            rate = achievable_rate(h_hat, p.h, sigma ** 2) if sigma > 0 else float("nan")
            record = TrialRecord(
                trial_index=p.index,
                selected_sector=p.selected,
                nmse_numerator=float(np.sum(np.abs(g_l - g_hat_l) ** 2)),
                nmse_denominator=float(np.sum(np.abs(g_l) ** 2)),
                rate_bits=rate,
                mu=training.mu,
                true_sector=p.true_sector,
                n_measurements=training.beams.shape[0],
            )
            logger.debug(f"Trial {p.index}: sector {p.selected}, support {support}")
            return TrialOutcome(record, g_l, g_hat_l, h_hat, tuple(support))
        except InSectorError as e:
            raise TrialError(p.index, e, config.scheme.value) from e

    return _map(execute, prepared, threads), sigma


def summarize(config: ExperimentConfig, records: Sequence[TrialRecord], sigma: float) -> ExperimentSummary:
    mus = np.array([r.mu for r in records])
    rates = np.array([r.rate_bits for r in records])
    mis = sum(1 for r in records if r.selected_sector != r.true_sector)
    m_used = records[0].n_measurements if records else config.m
    return ExperimentSummary(
        scheme=config.scheme.value,
        n=config.n_antennas,
        n_sec=config.n_sec,
        m=m_used,
        snr_db=None if config.noiseless() else config.snr_db,
        trials=len(records),
        nmse=nmse(records),
        mean_rate_bits=float(np.mean(rates)) if not np.all(np.isnan(rates)) else float("nan"),
        mean_mu=float(np.mean(mus)),
        median_mu=float(np.median(mus)),
        max_mu=float(np.max(mus)),
        mis_selections=mis,
        noise_std=sigma,
    )


def run_experiment(config: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    outcomes, sigma = run_trials(config, threads)
    records = [o.record for o in outcomes]
    summary = summarize(config, records, sigma)
    if summary.mis_selections:
        logger.warning(f"⚠️ SLS picked a sector other than the strongest in "
                       f"{summary.mis_selections}/{len(records)} trials")
    logger.info(f"✅ {summary.scheme.upper()} N={summary.n} M={summary.m} SNR={summary.snr_db} dB: "
                f"NMSE={summary.nmse:.4e}, rate={summary.mean_rate_bits:.3f} b/s/Hz, "
                f"mean mu={summary.mean_mu:.4f} over {summary.trials} trials")
    return ExperimentResult(config=config, records=records, summary=summary)


def run_single_estimate(config: ExperimentConfig) -> TrialOutcome:
    """Single-shot recovery of trial 0 of the configured scenario"""
    outcomes, _ = run_trials(config.model_copy(update={"trials": 1}), threads=1)
    return outcomes[0]


# ── Full-band estimation ─────────────────────────────────────────────────────

@dataclass
class FullBandResult:
    g: np.ndarray
    g_hat: np.ndarray
    h_hat: np.ndarray
    supports: List[Tuple[int, ...]]        # global beamspace indices per sector
    n_measurements: int
    noise_std: float

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for s in self.supports for i in s)

    @property
    def nmse(self) -> float:
        energy = float(np.sum(np.abs(self.g) ** 2))
        if energy == 0:
            raise UndefinedMetricError("NMSE undefined for an all-zero channel")
        return float(np.sum(np.abs(self.g - self.g_hat) ** 2)) / energy


def run_full_band(config: ExperimentConfig, h=None) -> FullBandResult:
    """Run the in-sector pipeline independently on every sector and stitch the beamspace"""
    sectors = config.sectors()
    sector_beams = design_sector_beams(config.n_antennas, config.n_sectors,
                                       config.n_mask_candidates, config.seed)
    if h is None:
        scenario = config.channel.model_copy(update={"band": None})
        h = synthesize_channel(sample_scenario(scenario, _trial_rng(config.seed, 0, CHANNEL_STREAM)),
                               config.n_antennas)
    h = as_complex_vector(h, "h")
    g = dft(h)
    noiseless = config.noiseless()

    trainings = [build_training(config.scheme, base, config.m, config.pool_factor,
                                np.random.default_rng((config.seed, 0, SCHEME_STREAM, s)))
                 for s, base in enumerate(sector_beams)]
    if noiseless:
        sigma = 0.0
    else:
        refs = [reference_beams(t, b, config.snr_reference) for t, b in zip(trainings, sector_beams)]
        stacked = np.vstack(refs)
        sigma = noise_std_for_snr(stacked, [h], config.snr_db)

    g_hat = np.zeros(config.n_antennas, dtype=np.complex128)
    supports = []
    n_measurements = 0
    for s, (sector, base, training) in enumerate(zip(sectors, sector_beams, trainings)):
        noise_rng = np.random.default_rng((config.seed, 0, NOISE_STREAM, s))
        if training.shifts is not None:
            y = simulate_measurements(h, base, training.shifts, sigma, noise_rng)
        else:
            y = measure(training.beams, h, sigma, noise_rng)
        g_hat_l, _, support = recover(training, y, config, noiseless)
        g_hat[sector.indices] = g_hat_l
        n_measurements += training.beams.shape[0]
        if training.scheme == Scheme.GENIE or training.shifts is not None and config.omp.oversampling == 1:
            supports.append(tuple(sector.d1 + j for j in support))
        else:
            supports.append(tuple(int(k) // config.omp.oversampling for k in support))

    logger.info(f"🛰️ Full-band estimate over {len(sectors)} sectors with {n_measurements} measurements")
    return FullBandResult(g=g, g_hat=g_hat, h_hat=np.fft.ifft(g_hat, norm="ortho"),
                          supports=supports, n_measurements=n_measurements, noise_std=sigma)


# ── Sweeps and coherence studies ─────────────────────────────────────────────

def sweep_points(config: ExperimentConfig) -> List[ExperimentConfig]:
    """Expand the M / SNR / scheme grid into one config per point"""
    points = []
    for scheme in config.schemes or [config.scheme]:
        m_values = [config.n_sec] if scheme == Scheme.GENIE else (config.m_values or [config.m])
        for m in m_values:
            for snr in config.snr_values or [config.snr_db]:
                points.append(config.model_copy(update={"scheme": scheme, "m": m, "snr_db": snr}))
    return points


def run_sweep(config: ExperimentConfig, threads: int = 1) -> List[ExperimentResult]:
    results = []
    points = sweep_points(config)
    for i, point in enumerate(points, 1):
        logger.info(f"📈 Sweep point {i}/{len(points)}: {point.scheme.value} M={point.m} SNR={point.snr_db}")
        results.append(run_experiment(point, threads))
    return results


@dataclass
class CoherenceStudy:
    n: int
    n_sec: int
    m: int
    uniform_psf: np.ndarray
    uniform_mu: float
    draws: Dict[str, np.ndarray]      # mu per trial, in trial order

    @property
    def cdfs(self) -> Dict[str, np.ndarray]:
        return {scheme: np.sort(mus) for scheme, mus in self.draws.items()}


def run_coherence_study(config: ExperimentConfig, threads: int = 1,
                        schemes: Sequence[Scheme] = (Scheme.PCS, Scheme.RCS)) -> CoherenceStudy:
    """PSF of the stride-rho optimum plus mu CDFs of the random shift schemes"""
    from app.algorithms.sampling import coherence_draws, indicator, psf

    n, n_sec = config.n_antennas, config.n_sec
    sector = config.sectors()[config.target_sector]
    optimum = uniform_shifts(n, n_sec)
    draws = {}
    for i, scheme in enumerate(schemes):
        if scheme not in (Scheme.PCS, Scheme.RCS):
            raise ConfigurationError(f"coherence CDFs are defined for PCS and RCS, not {scheme.value}")
        # disjoint seed ranges per scheme
        draws[scheme.value] = coherence_draws(scheme, n, n_sec, config.m, config.cdf_trials,
                                              config.seed + i * config.cdf_trials, threads)
        logger.info(f"📊 {scheme.value.upper()} median mu={np.median(draws[scheme.value]):.4f} "
                    f"over {config.cdf_trials} draws")
    return CoherenceStudy(n=n, n_sec=n_sec, m=config.m, uniform_psf=psf(indicator(optimum)),
                          uniform_mu=coherence(optimum, sector), draws=draws)
