"""Memory guard and worker-count defaults backed by psutil."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import psutil

from hother.orbitree.core.exceptions import ResourceError
from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)


def default_workers() -> int:
    """Usable CPU count (affinity-aware where the platform supports it)."""
    process = psutil.Process()
    try:
        return max(1, len(process.cpu_affinity()))
    except (AttributeError, NotImplementedError, psutil.Error):
        return max(1, psutil.cpu_count(logical=True) or 1)


class MemoryGuard:
    """Raise :class:`ResourceError` when system memory use crosses a threshold.

    Long-running loops call :meth:`check` between work items; the error names
    the checkpoint a caller can resume from.
    """

    def __init__(self, threshold_percent: float, stage: str, checkpoint: Path | str | None = None):
        self.threshold_percent = threshold_percent
        self.stage = stage
        self.checkpoint = checkpoint

    def check(self, **context: Any) -> None:
        """Sample memory usage once."""
        percent = psutil.virtual_memory().percent
        if percent <= self.threshold_percent:
            return
        logger.warning(
            "Memory threshold exceeded",
            extra={"stage": self.stage, "current": percent, "threshold": self.threshold_percent, **context},
        )
        raise ResourceError(
            "memory_percent",
            self.threshold_percent,
            checkpoint=self.checkpoint,
            context={"stage": self.stage, "current": percent, **context},
        )
