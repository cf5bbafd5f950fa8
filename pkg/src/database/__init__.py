from .config import DatabaseConfig, get_db, init_database
from .crud import get_points, get_run, get_runs, save_sweep, to_sweep_result
from .models import Base, SweepPointRecord, SweepRun

__all__ = [
    "Base",
    "DatabaseConfig",
    "SweepPointRecord",
    "SweepRun",
    "get_db",
    "get_points",
    "get_run",
    "get_runs",
    "init_database",
    "save_sweep",
    "to_sweep_result",
]
