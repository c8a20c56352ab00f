"""
Geometric narrowband channel synthesis for a half-wavelength ULA transmitter
"""
import enum
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.algorithms.dft_core import dft
from app.errors import ConfigurationError

logger = logging.getLogger(__name__)


class GridMode(enum.Enum):
    on_grid = "on_grid"
    off_grid = "off_grid"


@dataclass(frozen=True)
class Ray:
    aod: float       # radians, |aod| <= pi/2
    gain: complex

    @property
    def spatial_frequency(self) -> float:
        return float(np.sin(self.aod))


@dataclass(frozen=True)
class RaySet:
    rays: Tuple[Ray, ...]

    def __post_init__(self):
        if len(self.rays) < 1:
            raise ConfigurationError("a RaySet needs at least one ray")

    @property
    def count(self) -> int:
        return len(self.rays)

    def __iter__(self):
        return iter(self.rays)

    def union(self, other: "RaySet") -> "RaySet":
        return RaySet(self.rays + other.rays)


class ChannelScenarioConfig(BaseModel):
    """Parameters of the synthetic channel population"""
    model_config = ConfigDict(extra="forbid")

    n_antennas: int = Field(256, ge=1)
    k_rays: int = Field(4, ge=1)
    grid_mode: GridMode = GridMode.off_grid
    power_normalization: bool = True
    rng_seed: int = Field(0, ge=0)
    # (d1, d2) beamspace band the ray directions are drawn from; None = full band
    band: Optional[Tuple[int, int]] = None

    @model_validator(mode="after")
    def _check(self):
        if self.k_rays > self.n_antennas:
            raise ConfigurationError(f"k_rays={self.k_rays} exceeds n_antennas={self.n_antennas}")
        if self.band is not None:
            d1, d2 = self.band
            if not 0 <= d1 <= d2 < self.n_antennas:
                raise ConfigurationError(f"band {self.band} outside [0, {self.n_antennas})")
        return self


def steering_vector(n: int, theta: float) -> np.ndarray:
    """a(N, theta)[n] = exp(j n pi sin(theta))"""
    if n < 1:
        raise ConfigurationError(f"array size must be >= 1, got {n}")
    return np.exp(1j * np.pi * np.arange(n) * np.sin(theta))


def grid_spatial_frequency(index: int, n: int) -> float:
    """sin(theta) of DFT column `index`, wrapped to [-1, 1)"""
    return _wrap(2.0 * index / n)


def _wrap(s):
    return np.mod(np.asarray(s) + 1.0, 2.0) - 1.0


def synthesize_channel(rays: RaySet, n: int) -> np.ndarray:
    """h = sum_k alpha_k a(N, theta_k)"""
    if n < 1:
        raise ConfigurationError(f"array size must be >= 1, got {n}")
    sines = np.array([r.spatial_frequency for r in rays])
    gains = np.array([r.gain for r in rays], dtype=np.complex128)
    phases = np.exp(1j * np.pi * np.outer(np.arange(n), sines))
    return phases @ gains


def beamspace(h) -> np.ndarray:
    """g = U_N^* h"""
    return dft(h)


def sample_scenario(config: ChannelScenarioConfig, rng: np.random.Generator) -> RaySet:
    """Draw K rays; the gains are CN(0, 1/K) so that E[h^* h] = N"""
    n, k = config.n_antennas, config.k_rays

    if config.grid_mode == GridMode.on_grid:
        candidates = np.arange(n) if config.band is None else np.arange(config.band[0], config.band[1] + 1)
        if k > candidates.size:
            raise ConfigurationError(
                f"cannot place {k} distinct on-grid rays in {candidates.size} grid directions")
        indices = rng.choice(candidates, size=k, replace=False)
        sines = np.array([grid_spatial_frequency(int(i), n) for i in indices])
    elif config.band is None:
        sines = rng.uniform(-1.0, 1.0, size=k)
    else:
        # bin-centred band so the rays fall inside [d1, d2] on the DFT grid
        d1, d2 = config.band
        u = rng.uniform(d1 - 0.5, d2 + 0.5, size=k)
        sines = _wrap(2.0 * u / n)

    variance = 1.0 / k if config.power_normalization else 1.0
    gains = np.sqrt(variance / 2.0) * (rng.standard_normal(k) + 1j * rng.standard_normal(k))

    rays = tuple(Ray(aod=float(np.arcsin(s)), gain=complex(a)) for s, a in zip(sines, gains))
    logger.debug(f"Sampled {k} {config.grid_mode.value} rays, band={config.band}")
    return RaySet(rays)


def scenario_rng(config: ChannelScenarioConfig) -> np.random.Generator:
    return np.random.default_rng(config.rng_seed)


def sample_channels(config: ChannelScenarioConfig, count: int,
                    rng: Optional[np.random.Generator] = None) -> List[np.ndarray]:
    """Convenience: synthesize `count` channel realizations"""
    rng = rng if rng is not None else scenario_rng(config)
    return [synthesize_channel(sample_scenario(config, rng), config.n_antennas) for _ in range(count)]


def rays_from_pairs(pairs: Sequence[Tuple[float, complex]]) -> RaySet:
    return RaySet(tuple(Ray(aod=float(a), gain=complex(g)) for a, g in pairs))
