"""
Tabular and JSON output for designs, PSF studies, estimates and sweeps
"""
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from app.algorithms.beam_design import BaseBeam
from app.algorithms.sampling import ShiftSet, psf_report, uniform_shifts
from app.errors import ConfigurationError
from app.evaluation import CoherenceStudy, ExperimentResult, FullBandResult, TrialOutcome, TrialRecord

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
SWEEP_COLUMNS = ["scheme", "N", "N_sec", "M", "snr_db", "trials", "nmse", "mean_rate_bits", "mean_mu"]
CDF_COLUMNS = ["trial", "scheme", "N", "N_sec", "M", "mu"]
FORMATS = ("csv", "json")


def format_real(x: float) -> str:
    return FLOAT_FORMAT % x


def format_complex_vector(v) -> str:
    """Comma-separated `re:im` pairs at full double precision"""
    return ",".join(f"{format_real(z.real)}:{format_real(z.imag)}" for z in np.asarray(v, dtype=np.complex128))


def parse_complex_vector(text: str) -> np.ndarray:
    if not text.strip():
        return np.zeros(0, dtype=np.complex128)
    values = []
    for pair in text.split(","):
        re_part, im_part = pair.split(":")
        values.append(complex(float(re_part), float(im_part)))
    return np.array(values, dtype=np.complex128)


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return format_complex_vector(obj)
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def _clean(value):
    # JSON has no NaN/Inf
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def to_json(payload: Any) -> str:
    if isinstance(payload, pd.DataFrame):
        payload = [{k: _clean(v) for k, v in row.items()} for row in payload.to_dict(orient="records")]
    return json.dumps(payload, default=_json_default, indent=2)


# ── Frames ───────────────────────────────────────────────────────────────────

def sweep_frame(results: Sequence[ExperimentResult], extended: bool = False) -> pd.DataFrame:
    rows = []
    for result in results:
        s = result.summary
        row = {
            "scheme": s.scheme, "N": s.n, "N_sec": s.n_sec, "M": s.m,
            "snr_db": s.snr_db if s.snr_db is not None else float("inf"),
            "trials": s.trials, "nmse": s.nmse, "mean_rate_bits": s.mean_rate_bits, "mean_mu": s.mean_mu,
        }
        if extended:
            row.update({"median_mu": s.median_mu, "max_mu": s.max_mu,
                        "mis_selections": s.mis_selections, "noise_std": s.noise_std})
        rows.append(row)
    columns = SWEEP_COLUMNS + (["median_mu", "max_mu", "mis_selections", "noise_std"] if extended else [])
    return pd.DataFrame(rows, columns=columns)


def trial_frame(results: Sequence[ExperimentResult]) -> pd.DataFrame:
    """One row per trial of every sweep point"""
    rows = []
    for result in results:
        s = result.summary
        snr_db = s.snr_db if s.snr_db is not None else float("inf")
        for record in result.records:
            rows.append({"scheme": s.scheme, "M": s.m, "snr_db": snr_db, **record.to_dict()})
    return pd.DataFrame(rows)


def cdf_frame(study: CoherenceStudy) -> pd.DataFrame:
    rows = []
    for scheme, mus in study.draws.items():
        for trial, mu in enumerate(mus):
            rows.append({"trial": trial, "scheme": scheme, "N": study.n, "N_sec": study.n_sec,
                         "M": study.m, "mu": float(mu)})
    return pd.DataFrame(rows, columns=CDF_COLUMNS)


def psf_frame(psf_values, shifts: ShiftSet) -> pd.DataFrame:
    psf_values = np.asarray(psf_values, dtype=np.complex128)
    return pd.DataFrame({
        "lag": np.arange(psf_values.size),
        "psf_re": psf_values.real,
        "psf_im": psf_values.imag,
        "psf_abs": np.abs(psf_values),
        "sampled": [i in set(shifts.shifts) for i in range(psf_values.size)],
    })


def design_frame(beams: Sequence[BaseBeam]) -> pd.DataFrame:
    rows = []
    for s, beam in enumerate(beams):
        sector = beam.sector
        report = psf_report(uniform_shifts(sector.n, sector.n_sec), sector)
        rows.append({
            "sector": s, "d1": sector.d1, "d2": sector.d2, "N": sector.n, "N_sec": sector.n_sec,
            "rho": sector.rho, "papr": beam.papr, "norm_factor": beam.norm_factor,
            "uniform_mu": report.mu,
            "mask": format_complex_vector(beam.mask.p[sector.indices]),
            "f_b": format_complex_vector(beam.f_b),
        })
    return pd.DataFrame(rows)


def estimate_frame(outcome: TrialOutcome, sector_d1: int) -> pd.DataFrame:
    g_l, g_hat_l = outcome.g_l, outcome.g_hat_l
    return pd.DataFrame({
        "index": sector_d1 + np.arange(g_l.size),
        "g_re": g_l.real, "g_im": g_l.imag,
        "g_hat_re": g_hat_l.real, "g_hat_im": g_hat_l.imag,
    })


def full_band_frame(result: FullBandResult) -> pd.DataFrame:
    return pd.DataFrame({
        "index": np.arange(result.g.size),
        "g_re": result.g.real, "g_im": result.g.imag,
        "g_hat_re": result.g_hat.real, "g_hat_im": result.g_hat.imag,
    })


# ── Writers ──────────────────────────────────────────────────────────────────

def render(frame: pd.DataFrame, fmt: str = "csv") -> str:
    if fmt not in FORMATS:
        raise ConfigurationError(f"unknown output format {fmt!r}, expected one of {FORMATS}")
    if fmt == "csv":
        return frame.to_csv(index=False, float_format=FLOAT_FORMAT)
    return to_json(frame)


def write_output(frame: pd.DataFrame, path: Optional[Union[str, Path]], fmt: str = "csv") -> str:
    """Render `frame` and write it to `path` (single writer); returns the text"""
    text = render(frame, fmt)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        logger.info(f"💾 Wrote {len(frame)} rows to {path}")
    return text


def summary_dict(result: ExperimentResult) -> Dict[str, Any]:
    return {k: _clean(v) for k, v in result.summary.to_dict().items()}


def record_dict(record: TrialRecord) -> Dict[str, Any]:
    return {k: _clean(v) for k, v in record.to_dict().items()}


def records_dicts(result: ExperimentResult) -> List[Dict[str, Any]]:
    return [record_dict(r) for r in result.records]
