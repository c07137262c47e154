import logging
import os

import dotenv
from pydantic import BaseModel, ConfigDict, Field

dotenv.load_dotenv()


def _env_float(name, default):
    return float(os.getenv(name, default))


def _env_int(name, default):
    return int(os.getenv(name, default))


LOG_LEVEL = os.getenv('LOG_LEVEL', 'WARNING')
SCAN_LIMIT = _env_int('LAGRANGE_SCAN_LIMIT', 1_000_000)
ORACLE_MAX_N = _env_int('LAGRANGE_ORACLE_MAX_N', 12)
CACHE_SIZE = _env_int('LAGRANGE_CACHE_SIZE', 4096)


class SolverConfig(BaseModel):
    """Settings shared by the ascent, the Newton polish and the oracle."""

    model_config = ConfigDict(frozen=True)

    tol: float = Field(default_factory=lambda: _env_float('LAGRANGE_TOL', 1e-10), gt=0)
    max_iters: int = Field(default_factory=lambda: _env_int('LAGRANGE_MAX_ITERS', 500), ge=1)
    starts: int = Field(default_factory=lambda: _env_int('LAGRANGE_STARTS', 8), ge=0)
    seed: int = Field(default_factory=lambda: _env_int('LAGRANGE_SEED', 0))
    support_threshold: float = Field(
        default_factory=lambda: _env_float('LAGRANGE_SUPPORT_THRESHOLD', 1e-9), gt=0)
    value_tol: float = Field(default_factory=lambda: _env_float('LAGRANGE_VALUE_TOL', 1e-9), gt=0)
    kkt_tol: float = Field(default_factory=lambda: _env_float('LAGRANGE_KKT_TOL', 1e-8), gt=0)
    threads: int = Field(default_factory=lambda: _env_int('LAGRANGE_THREADS', 1), ge=1)
    # projected gradient hands over to the Newton polish below this stationarity
    polish_tol: float = Field(default=1e-7, gt=0)
    newton_iters: int = Field(default=60, ge=1)
    max_clique_starts: int = Field(default=16, ge=0)

    def key(self):
        return tuple(self.model_dump().items())


def configure_logging(level=None):
    logging.basicConfig(
        level=(level or LOG_LEVEL).upper(),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )
