import os
from typing import final

from dotenv import load_dotenv

load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == 'true'


def _env_threads(name: str) -> int | None:
    """Unset or empty means the ThreadPoolExecutor default."""
    raw = os.getenv(name, '').strip()
    if not raw:
        return None
    threads = int(raw)
    if threads < 1:
        raise ValueError(f"{name} must be a positive integer, got {raw!r}")
    return threads


@final
class Settings:
    DEBUG_MODE: bool = _env_bool('DEBUG_MODE', 'false')

    THREADS: int | None = _env_threads('DD_CRB_THREADS')

    FAST_TRANSFORM: bool = _env_bool('DD_CRB_FAST_TRANSFORM', 'true')

    # Doppler step in units of 1/T, delay step relative to tau_t
    FD_NU_STEP: float = float(os.getenv('DD_CRB_FD_NU_STEP', '1e-6'))
    FD_TAU_STEP: float = float(os.getenv('DD_CRB_FD_TAU_STEP', '1e-6'))

    SINGULAR_RTOL: float = float(os.getenv('DD_CRB_SINGULAR_RTOL', '1e-12'))

    CSV_FLOAT_FORMAT: str = os.getenv('DD_CRB_CSV_FLOAT_FORMAT', '%.16e')


settings = Settings()
