import os
import sys
from pathlib import Path

from dotenv import load_dotenv
from loguru import logger

# Load environment variables
load_dotenv()


class SimulationSettings:
    """Environment-driven settings for simulations, logging and storage"""

    def __init__(self):
        self.log_level = os.getenv('MIMO_LOG_LEVEL', 'INFO').upper()
        self.log_dir = Path(os.getenv('MIMO_LOG_DIR', 'logs'))
        self.results_dir = Path(os.getenv('MIMO_RESULTS_DIR', 'results'))
        self.workers = self._int_env('MIMO_WORKERS', 1, minimum=1)
        # Counted cost of one squared magnitude |z|^2
        self.abs2_cost = self._int_env('MIMO_ABS2_COST', 1, minimum=0)
        self.database_url = os.getenv('DATABASE_URL', 'sqlite:///./results/sweeps.db')

    @staticmethod
    def _int_env(name: str, default: int, minimum: int) -> int:
        raw = os.getenv(name)
        if raw is None or raw.strip() == '':
            return default
        try:
            value = int(raw)
        except ValueError:
            logger.warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
            return default
        if value < minimum:
            logger.warning(f"Ignoring {name}={value} below {minimum}, using {default}")
            return default
        return value


settings = SimulationSettings()


def configure_logging(level: str = None, log_dir: Path = None, log_file: str = 'simulation.log') -> Path:
    """Route loguru output to stderr and to a file under the log directory"""
    level = (level or settings.log_level).upper()
    log_dir = Path(log_dir or settings.log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    log_path = log_dir / log_file

    logger.remove()
    logger.add(sys.stderr, level=level, format="{time:YYYY-MM-DD HH:mm:ss} - {level} - {message}")
    logger.add(log_path, level="DEBUG", rotation="10 MB", enqueue=False)
    return log_path
