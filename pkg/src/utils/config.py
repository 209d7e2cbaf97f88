import os

from dotenv import load_dotenv

THREADS_ENV = "ERGOLAB_THREADS"


def load_environment() -> None:
    """Load environment variables from a .env file, if there is one."""
    load_dotenv()


def max_workers() -> int:
    """Worker cap for sweeps: ERGOLAB_THREADS if set, else the CPU count."""
    value = os.getenv(THREADS_ENV)
    if not value:
        return os.cpu_count() or 1
    try:
        workers = int(value)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {value!r}")
    if workers < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {value!r}")
    return workers
