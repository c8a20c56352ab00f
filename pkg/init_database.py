#!/usr/bin/env python3
"""
Database initialization script for the in-sector result store
"""

import logging
import sys
from sqlalchemy import create_engine, text, inspect
from sqlalchemy.exc import OperationalError, ProgrammingError

from config import configure_logging, settings
from database import Base, make_engine

logger = logging.getLogger(__name__)

EXPECTED_TABLES = ["experiment_runs", "trial_results"]


def create_database_tables(database_url: str = None) -> bool:
    """Create database tables with proper error handling"""
    database_url = database_url or settings.database_url
    try:
        engine = make_engine(database_url)
        with engine.connect() as conn:
            conn.execute(text("SELECT 1"))
        logger.info("✅ Database connection successful")

        logger.info("🔧 Creating database tables...")
        Base.metadata.create_all(bind=engine)
        tables = inspect(engine).get_table_names()
        logger.info(f"📊 Created tables: {', '.join(tables)}")
        return True

    except OperationalError as e:
        logger.error(f"❌ Database connection error: {e}")
        logger.error("🔍 Check DATABASE_URL and that the database is reachable")
        return False

    except ProgrammingError as e:
        logger.error(f"❌ Database schema error: {e}")
        return False


def check_database_status(database_url: str = None) -> bool:
    """Check database connection and table status"""
    database_url = database_url or settings.database_url
    try:
        engine = create_engine(database_url)
        tables = inspect(engine).get_table_names()
        missing = [t for t in EXPECTED_TABLES if t not in tables]
        if missing:
            logger.warning(f"⚠️ Missing tables: {', '.join(missing)}")
            return False
        logger.info(f"✅ All tables present: {len(tables)} tables")
        return True
    except OperationalError as e:
        logger.error(f"❌ Database status check failed: {e}")
        return False


if __name__ == "__main__":
    configure_logging()
    logger.info("🚀 In-sector result store - Database Initialization")
    logger.info("=" * 50)

    if check_database_status():
        logger.info("✅ Database is already initialized")
        sys.exit(0)
    if not create_database_tables():
        logger.error("❌ Database initialization failed")
        sys.exit(1)
    logger.info("🎉 Database initialization completed")
