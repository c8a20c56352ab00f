from sqlalchemy import create_engine, text
from sqlalchemy.orm import declarative_base, relationship, sessionmaker, Session
from sqlalchemy import Column, Integer, String, Float, DateTime, JSON, ForeignKey
from sqlalchemy.sql import func
import logging
import uuid
from typing import List, Optional, Sequence

from config import settings
from app.evaluation import ExperimentResult

logger = logging.getLogger(__name__)

VARCHAR = String


def make_engine(database_url: str):
    if database_url.startswith("sqlite"):
        return create_engine(database_url, connect_args={"check_same_thread": False})
    return create_engine(
        database_url,
        pool_pre_ping=True,
        pool_recycle=300,
        pool_size=10,
        max_overflow=20,
        pool_timeout=30,
    )


DATABASE_URL = settings.database_url
engine = make_engine(DATABASE_URL)

SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

Base = declarative_base()


def get_db():
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()


class ExperimentRun(Base):
    __tablename__ = "experiment_runs"

    id = Column(VARCHAR(36), primary_key=True, default=lambda: str(uuid.uuid4()))
    created_at = Column(DateTime, server_default=func.current_timestamp())
    scheme = Column(String(16), nullable=False)
    n = Column(Integer, nullable=False)
    n_sec = Column(Integer, nullable=False)
    m = Column(Integer, nullable=False)
    snr_db = Column(Float, nullable=True)          # NULL = noiseless
    trials = Column(Integer, nullable=False)
    seed = Column(Integer, nullable=False)
    config = Column(JSON, nullable=False)
    nmse = Column(Float)
    mean_rate_bits = Column(Float, nullable=True)
    mean_mu = Column(Float)
    mis_selections = Column(Integer, default=0)

    trials_rel = relationship("TrialResult", back_populates="run", cascade="all, delete-orphan",
                              order_by="TrialResult.trial_index")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "created_at": self.created_at.isoformat() if self.created_at else None,
            "scheme": self.scheme, "N": self.n, "N_sec": self.n_sec, "M": self.m,
            "snr_db": self.snr_db, "trials": self.trials, "seed": self.seed,
            "nmse": self.nmse, "mean_rate_bits": self.mean_rate_bits,
            "mean_mu": self.mean_mu, "mis_selections": self.mis_selections,
        }


class TrialResult(Base):
    __tablename__ = "trial_results"

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(VARCHAR(36), ForeignKey("experiment_runs.id"), nullable=False, index=True)
    trial_index = Column(Integer, nullable=False)
    selected_sector = Column(Integer, nullable=False)
    true_sector = Column(Integer, nullable=False)
    nmse_numerator = Column(Float, nullable=False)
    nmse_denominator = Column(Float, nullable=False)
    rate_bits = Column(Float, nullable=True)
    mu = Column(Float, nullable=False)

    run = relationship("ExperimentRun", back_populates="trials_rel")


def _finite(x: Optional[float]) -> Optional[float]:
    if x is None or x != x or x in (float("inf"), float("-inf")):
        return None
    return float(x)


def store_results(db: Session, results: Sequence[ExperimentResult]) -> List[str]:
    """Persist runs with their trial rows; returns the new run ids"""
    run_ids = []
    for result in results:
        s = result.summary
        run = ExperimentRun(
            scheme=s.scheme, n=s.n, n_sec=s.n_sec, m=s.m, snr_db=_finite(s.snr_db),
            trials=s.trials, seed=result.config.seed,
            config=result.config.model_dump(mode="json"),
            nmse=s.nmse, mean_rate_bits=_finite(s.mean_rate_bits),
            mean_mu=s.mean_mu, mis_selections=s.mis_selections,
        )
        run.trials_rel = [
            TrialResult(trial_index=r.trial_index, selected_sector=r.selected_sector,
                        true_sector=r.true_sector, nmse_numerator=r.nmse_numerator,
                        nmse_denominator=r.nmse_denominator, rate_bits=_finite(r.rate_bits), mu=r.mu)
            for r in result.records
        ]
        db.add(run)
        db.flush()
        run_ids.append(run.id)
    db.commit()
    logger.info(f"💾 Stored {len(run_ids)} experiment runs")
    return run_ids


def list_runs(db: Session, scheme: Optional[str] = None, limit: int = 100) -> List[ExperimentRun]:
    query = db.query(ExperimentRun)
    if scheme:
        query = query.filter(ExperimentRun.scheme == scheme)
    return query.order_by(ExperimentRun.created_at.desc(), ExperimentRun.id).limit(limit).all()


def create_tables(bind=None):
    """Create the result-store tables"""
    bind = bind or engine
    try:
        with bind.connect() as conn:
            conn.execute(text("SELECT 1"))
        logger.info("✅ Database connection verified")

        Base.metadata.create_all(bind=bind)

        from sqlalchemy import inspect
        tables = inspect(bind).get_table_names()
        logger.info(f"📊 Available tables: {', '.join(tables)}")
    except Exception as e:
        logger.error(f"❌ Error creating tables: {e}")
        raise
