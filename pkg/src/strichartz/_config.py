import os

from .errors import DomainError

THREADS_ENV = "STRICHARTZ_THREADS"


def threads() -> int:
    """Worker count for FFTs; ``STRICHARTZ_THREADS`` caps it (default 1)."""
    raw = os.environ.get(THREADS_ENV, "1").strip()
    try:
        n = int(raw)
    except ValueError as exc:
        raise DomainError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    return max(1, n)
