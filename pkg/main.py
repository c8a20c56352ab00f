"""
In-sector CS simulator HTTP service
"""
import logging
from datetime import datetime
from typing import Any, Dict, Optional

from fastapi import FastAPI, HTTPException, Depends
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field
from sqlalchemy.orm import Session

from config import build_experiment_config, configure_logging, settings
from database import get_db, create_tables, store_results, list_runs
from app.errors import InSectorError
from app.evaluation import (
    ExperimentConfig, design_sector_beams, run_coherence_study, run_full_band,
    run_single_estimate, run_sweep,
)
from app.algorithms.dft_core import dft
from app import reporting

configure_logging()
logger = logging.getLogger(__name__)


class ExperimentRequest(BaseModel):
    """Flat experiment keys, same names as the config file"""
    config: Dict[str, Any] = Field(default_factory=dict)
    threads: int = Field(1, ge=1)


class EstimateRequest(ExperimentRequest):
    full_band: bool = False


class SweepRequest(ExperimentRequest):
    store: bool = False
    extended: bool = False
    include_trials: bool = False


app = FastAPI(
    title="In-Sector CS",
    description="In-sector convolutional compressed sensing for mmWave channel estimation",
    version="1.0.0"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def _config(request: ExperimentRequest) -> ExperimentConfig:
    return build_experiment_config(request.config)


def _fail(action: str, e: Exception):
    if isinstance(e, InSectorError):
        logger.error(f"❌ {action} rejected: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    logger.error(f"❌ {action} failed: {e}")
    raise HTTPException(status_code=500, detail=f"{action} failed: {str(e)}")


@app.on_event("startup")
def startup_event():
    try:
        create_tables()
    except Exception as e:
        # the compute endpoints work without a store
        logger.warning(f"⚠️ Result store unavailable: {e}")
    logger.info("✅ In-sector CS service startup completed")


@app.get("/health")
def health_check():
    return {"status": "healthy", "timestamp": datetime.utcnow().isoformat()}


@app.post("/api/design")
def design(request: ExperimentRequest):
    """Per-sector base beams with their masks and PAPR"""
    try:
        config = _config(request)
        beams = design_sector_beams(config.n_antennas, config.n_sectors, config.n_mask_candidates, config.seed)
        return {"sectors": [
            {**beam.sector.to_dict(), "sector": s, "papr": beam.papr, "norm_factor": beam.norm_factor,
             "mask": reporting.format_complex_vector(beam.mask.p[beam.sector.indices]),
             "f_b": reporting.format_complex_vector(beam.f_b)}
            for s, beam in enumerate(beams)
        ]}
    except Exception as e:
        _fail("Design", e)


@app.post("/api/psf")
def psf(request: ExperimentRequest):
    try:
        study = run_coherence_study(_config(request), request.threads)
        return {
            "N": study.n, "N_sec": study.n_sec, "M": study.m,
            "uniform_mu": study.uniform_mu,
            "uniform_psf": reporting.format_complex_vector(study.uniform_psf),
            "cdfs": {scheme: [float(mu) for mu in mus] for scheme, mus in study.cdfs.items()},
        }
    except Exception as e:
        _fail("PSF study", e)


@app.post("/api/estimate")
def estimate(request: EstimateRequest):
    try:
        config = _config(request)
        if request.full_band:
            result = run_full_band(config)
            return {
                "nmse": result.nmse,
                "n_measurements": result.n_measurements,
                "support": list(result.support),
                "g": reporting.format_complex_vector(result.g),
                "g_hat": reporting.format_complex_vector(result.g_hat),
            }
        outcome = run_single_estimate(config)
        return {
            "record": reporting.record_dict(outcome.record),
            "support": [int(i) for i in outcome.support],
            "g_L": reporting.format_complex_vector(outcome.g_l),
            "g_hat_L": reporting.format_complex_vector(outcome.g_hat_l),
            "beamspace_h_hat": reporting.format_complex_vector(dft(outcome.h_hat)),
        }
    except Exception as e:
        _fail("Estimate", e)


@app.post("/api/sweep")
def sweep(request: SweepRequest, db: Session = Depends(get_db)):
    try:
        results = run_sweep(_config(request), request.threads)
        response: Dict[str, Any] = {
            "rows": [
                {k: reporting._clean(v) for k, v in row.items()}
                for row in reporting.sweep_frame(results, extended=request.extended).to_dict(orient="records")
            ],
        }
        if request.include_trials:
            response["runs"] = [
                {"summary": reporting.summary_dict(r), "trials": reporting.records_dicts(r)} for r in results
            ]
        if request.store:
            response["run_ids"] = store_results(db, results)
        return response
    except Exception as e:
        _fail("Sweep", e)


@app.get("/api/runs")
def runs(scheme: Optional[str] = None, limit: int = 100, db: Session = Depends(get_db)):
    """Stored sweep runs, newest first"""
    try:
        return {"runs": [run.to_dict() for run in list_runs(db, scheme, limit)]}
    except Exception as e:
        _fail("Listing runs", e)


if __name__ == "__main__":
    import uvicorn

    logger.info(f"🌐 Starting server on {settings.host}:{settings.port}")
    uvicorn.run(
        "main:app",
        host=settings.host,
        port=settings.port,
        log_level=settings.log_level.lower(),
        access_log=True,
        reload=False
    )
