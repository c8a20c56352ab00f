"""
Settings and experiment-file loading for the in-sector simulator
"""
import math
import os
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from app.evaluation import ExperimentConfig
from app.errors import ConfigurationError

load_dotenv()

logger = logging.getLogger(__name__)


class Settings(BaseModel):
    """Process-level settings read from the environment"""
    log_level: str = "INFO"
    threads: int = Field(1, ge=1)
    output_dir: str = "results"
    database_url: str = "sqlite:///insector_results.db"
    host: str = "0.0.0.0"
    port: int = 3000


def get_settings() -> Settings:
    try:
        return Settings(
            log_level=os.getenv("INSECTOR_LOG_LEVEL", "INFO").upper(),
            threads=int(os.getenv("INSECTOR_THREADS", "1")),
            output_dir=os.getenv("INSECTOR_OUTPUT_DIR", "results"),
            database_url=os.getenv("DATABASE_URL", "sqlite:///insector_results.db"),
            host=os.getenv("HOST", os.getenv("HOSTNAME", "0.0.0.0")),
            port=int(os.getenv("PORT", "3000")),
        )
    except (ValueError, ValidationError) as e:
        raise ConfigurationError(f"Invalid environment settings: {e}") from e


def configure_logging(settings: Optional[Settings] = None):
    settings = settings or get_settings()
    logging.basicConfig(level=getattr(logging, settings.log_level, logging.INFO),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


# ── Experiment file ──────────────────────────────────────────────────────────

def _parse_bool(raw: str) -> bool:
    value = raw.strip().lower()
    if value in ("true", "yes", "on", "1"):
        return True
    if value in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_snr(raw: str) -> Optional[float]:
    value = raw.strip().lower()
    if value in ("none", "inf", "+inf", "noiseless"):
        return None
    snr = float(value)
    return None if math.isinf(snr) and snr > 0 else snr


def _list_of(parse: Callable[[str], Any]) -> Callable[[str], List[Any]]:
    def parse_list(raw: str) -> List[Any]:
        items = [item.strip() for item in raw.split(",") if item.strip()]
        if not items:
            raise ValueError("empty list")
        return [parse(item) for item in items]
    return parse_list


def _lower(raw: str) -> str:
    return raw.strip().lower()


# key -> (path into ExperimentConfig, parser)
CONFIG_KEYS: Dict[str, tuple] = {
    "n_antennas": (("n_antennas",), int),
    "n_sectors": (("n_sectors",), int),
    "m": (("m",), int),
    "snr_db": (("snr_db",), _parse_snr),
    "trials": (("trials",), int),
    "scheme": (("scheme",), _lower),
    "k_rays": (("channel", "k_rays"), int),
    "grid_mode": (("channel", "grid_mode"), _lower),
    "power_normalization": (("channel", "power_normalization"), _parse_bool),
    "in_sector": (("in_sector",), _parse_bool),
    "target_sector": (("target_sector",), int),
    "max_sparsity": (("omp", "max_sparsity"), int),
    "residual_tol": (("omp", "residual_tol"), float),
    "oversampling": (("omp", "oversampling"), int),
    "n_mask_candidates": (("n_mask_candidates",), int),
    "pool_factor": (("pool_factor",), int),
    "snr_reference": (("snr_reference",), _lower),
    "seed": (("seed",), int),
    "m_values": (("m_values",), _list_of(int)),
    "snr_values": (("snr_values",), _list_of(_parse_snr)),
    "schemes": (("schemes",), _list_of(_lower)),
    "cdf_trials": (("cdf_trials",), int),
}


def parse_config_text(text: str) -> Dict[str, Any]:
    """Flat `key = value` lines to a {key: parsed value} dict; `#` starts a comment"""
    values: Dict[str, Any] = {}
    for lineno, raw_line in enumerate(text.splitlines(), 1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {raw_line.strip()!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        if not raw:
            raise ConfigurationError(f"line {lineno}: missing value for {key!r}")
        try:
            values[key] = CONFIG_KEYS[key][1](raw)
        except ValueError as e:
            raise ConfigurationError(f"line {lineno}: bad value for {key!r}: {e}") from e
    return values


def build_experiment_config(values: Dict[str, Any],
                            overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Map flat keys onto the nested ExperimentConfig; overrides win over file values"""
    flat = dict(values)
    unknown = sorted(set(flat) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigurationError(f"unknown keys: {', '.join(unknown)}")
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"unknown key {key!r}")
        flat[key] = value

    nested: Dict[str, Any] = {"channel": {}, "omp": {}}
    for key, value in flat.items():
        path = CONFIG_KEYS[key][0]
        target = nested
        for part in path[:-1]:
            target = target[part]
        target[path[-1]] = value
    nested["channel"]["n_antennas"] = nested.get("n_antennas", 256)

    try:
        return ExperimentConfig(**nested)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        raise ConfigurationError(f"Invalid experiment configuration: {messages}") from e


def load_experiment_config(path: Optional[Union[str, Path]] = None,
                           overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    values: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigurationError(f"config file not found: {path}")
        values = parse_config_text(path.read_text())
        logger.info(f"📋 Loaded {len(values)} settings from {path}")
    return build_experiment_config(values, overrides)


settings = get_settings()
