"""
SQLite results store: engine, session factory and table creation.

Only sqlite URLs are accepted; the manifest ships no driver for server
databases. In-memory stores share one connection so every session sees the
same tables.
"""

from pathlib import Path
from typing import Generator, Optional

from loguru import logger
from sqlalchemy import create_engine
from sqlalchemy.engine import Engine, make_url
from sqlalchemy.exc import ArgumentError
from sqlalchemy.orm import Session, sessionmaker
from sqlalchemy.pool import StaticPool

from ..exceptions import ConfigInvalid
from ..settings import settings
from .models import Base


def _sqlite_engine(database_url: str) -> Engine:
    try:
        url = make_url(database_url)
    except ArgumentError as e:
        raise ConfigInvalid(f"Malformed database URL {database_url!r}") from e
    if url.get_backend_name() != "sqlite":
        raise ConfigInvalid(f"Results store needs a sqlite URL, got backend {url.get_backend_name()!r}")

    location = url.database or ""
    if location in ("", ":memory:"):
        return create_engine(url, connect_args={"check_same_thread": False}, poolclass=StaticPool)
    Path(location).parent.mkdir(parents=True, exist_ok=True)
    return create_engine(url)


class DatabaseConfig:
    """Results store connection management"""

    def __init__(self, database_url: Optional[str] = None):
        self.database_url = database_url or settings.database_url
        self.engine = _sqlite_engine(self.database_url)
        self.SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=self.engine)
        logger.info(f"Results store: {self.database_url}")

    def create_tables(self):
        try:
            Base.metadata.create_all(bind=self.engine)
        except Exception as e:
            logger.error(f"Failed to create result tables: {e}")
            raise

    def get_session(self) -> Session:
        return self.SessionLocal()

    def close_connection(self):
        self.engine.dispose()
        logger.debug("Results store closed")


def init_database(database_url: Optional[str] = None) -> DatabaseConfig:
    """Configure the results store and make sure its tables exist"""
    db_config = DatabaseConfig(database_url)
    db_config.create_tables()
    return db_config


def get_db(db_config: DatabaseConfig) -> Generator[Session, None, None]:
    """Yield a session that is always closed"""
    db = db_config.get_session()
    try:
        yield db
    finally:
        db.close()
