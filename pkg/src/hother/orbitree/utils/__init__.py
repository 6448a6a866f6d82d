"""Ambient helpers: logging, worker pools and resource guards."""

from .concurrency import map_in_workers
from .logging import get_logger
from .resources import MemoryGuard, default_workers

__all__ = ["MemoryGuard", "default_workers", "get_logger", "map_in_workers"]
