"""JSON-lines candidate files and the run manifest.

Candidate lines carry no timing data, so the same settings give
byte-identical candidate files; timings live in the manifest only.
"""

from __future__ import annotations

import platform
from collections.abc import Iterable, Iterator
from datetime import UTC, datetime
from importlib import metadata
from pathlib import Path
from typing import Any, TextIO

from pydantic import BaseModel, Field

from hother.orbitree.config import OrbitreeSettings
from hother.orbitree.strata.models import CandidateScheme, PrecheckReport, StratumReport
from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)

_VERSIONED = ("hother-orbitree", "numpy", "galois", "pydantic", "anyio", "psutil")


def package_versions() -> dict[str, str]:
    """Installed versions of the packages that shape the results."""
    versions = {"python": platform.python_version()}
    for name in _VERSIONED:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def write_candidates(records: Iterable[CandidateScheme], stream: TextIO) -> int:
    """One JSON object per line; returns the number of lines written."""
    written = 0
    for record in records:
        stream.write(record.model_dump_json() + "\n")
        written += 1
    return written


def read_candidates(stream: TextIO) -> Iterator[CandidateScheme]:
    for line in stream:
        if line.strip():
            yield CandidateScheme.model_validate_json(line)


class RunManifest(BaseModel):
    """Provenance of one command run.

    Attributes:
        command: The dispatched command, e.g. ``strata run``
        seed: Seed of the group generators and retract tie-breaks
        config_hash: Hash embedded in every artifact of the run
        settings: Full settings of the run
        versions: Python and package versions
        artifacts: Paths written, keyed by role
        reports: Per-stratum counts and stage timings
        prechecks: Point-count verdicts
    """

    command: str
    seed: int
    config_hash: str
    settings: dict[str, Any]
    versions: dict[str, str] = Field(default_factory=package_versions)
    created: str = Field(default_factory=lambda: datetime.now(UTC).isoformat(timespec="seconds"))
    artifacts: dict[str, str] = Field(default_factory=dict[str, str])
    reports: list[StratumReport] = Field(default_factory=list[StratumReport])
    prechecks: list[PrecheckReport] = Field(default_factory=list[PrecheckReport])
    extra: dict[str, Any] = Field(default_factory=dict[str, Any])

    @classmethod
    def for_settings(cls, command: str, settings: OrbitreeSettings) -> RunManifest:
        return cls(
            command=command,
            seed=settings.seed,
            config_hash=settings.config_hash(),
            settings=settings.model_dump(mode="json"),
        )

    def write(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.model_dump_json(indent=2) + "\n")
        logger.info("Manifest written", extra={"path": str(path), "command": self.command})
