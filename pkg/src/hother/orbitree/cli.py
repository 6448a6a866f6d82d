"""The ``orbitree`` command.

Subcommands::

    orbitree tree build --space fano --depth 3 --output fano.tree
    orbitree tree verify --space fano --tree fano.tree --depth 3
    orbitree geometry points --space og+ --ext 1
    orbitree strata precheck
    orbitree strata run --stratum g6-plane-quintic --output quintic.jsonl
    orbitree strata genus7-generic --workers 8 --output g7.jsonl --manifest g7.json

Errors are printed on stderr as one JSON record. Exit status is 0 on
success, 2 for invalid flags, 3 when a resource budget is exceeded and 1
for every other failure.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from collections.abc import Iterator, Sequence
from pathlib import Path
from typing import Literal, TextIO

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from hother.orbitree.config import Budgets, OgOracleSettings, OrbitreeSettings
from hother.orbitree.core.exceptions import OrbitreeError, ResourceError, UsageError
from hother.orbitree.core.serialization import dump_tree, load_tree
from hother.orbitree.core.tree import build_tree, verify
from hother.orbitree.geometry.automorphisms import automorphism_generators
from hother.orbitree.geometry.spaces import SPACE_IDS, AmbientSpace, ambient_space
from hother.orbitree.strata.genus7 import GREEN_REPRESENTATIVES, genus7_generic_pipeline
from hother.orbitree.strata.oracles import IndependenceOracle, OrthogonalGrassmannianOracle
from hother.orbitree.strata.output import RunManifest, write_candidates
from hother.orbitree.strata.pipeline import execute_stratum
from hother.orbitree.strata.precheck import precheck_all
from hother.orbitree.strata.tables import STRATA
from hother.orbitree.types import EligibilityOracle
from hother.orbitree.utils.logging import get_logger
from hother.orbitree.utils.resources import default_workers

logger = get_logger(__name__)

EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

Command = Literal[
    "tree build", "tree verify", "geometry points", "strata precheck", "strata run", "strata genus7-generic"
]


class RunConfig(BaseModel):
    """Validated command-line configuration of one run."""

    model_config = ConfigDict(frozen=True)

    command: Command
    space: str | None = None
    depth: int | None = Field(default=None, ge=0)
    stratum: str | None = None
    oracle: Literal["none", "independent", "og+"] = "none"
    tree: Path | None = None
    trials: int = Field(default=200, ge=0)
    ext: int = Field(default=1, ge=1, le=8)
    seed: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1)
    strict: bool = False
    k_max: int = 4
    threshold: int = 12
    max_extension: int = 3
    max_points: int | None = None
    max_evaluations: int | None = None
    max_coset_dimension: int | None = None
    memory_percent: float | None = None
    output: Path | None = None
    manifest: Path | None = None

    @field_validator("space")
    @classmethod
    def _known_space(cls, value: str | None) -> str | None:
        if value is not None and value not in SPACE_IDS:
            raise ValueError(f"unknown space {value!r}")
        return value

    @field_validator("stratum")
    @classmethod
    def _known_stratum(cls, value: str | None) -> str | None:
        if value is not None and value not in STRATA:
            raise ValueError(f"unknown stratum {value!r}")
        return value

    def settings(self) -> OrbitreeSettings:
        budgets = Budgets.from_env(
            max_points=self.max_points,
            max_evaluations=self.max_evaluations,
            max_coset_dimension=self.max_coset_dimension,
            memory_percent=self.memory_percent,
        )
        return OrbitreeSettings(
            seed=self.seed,
            workers=self.workers,
            strict=self.strict,
            max_extension_degree=self.max_extension,
            budgets=budgets,
            og=OgOracleSettings(k_max=self.k_max, threshold=self.threshold),
        )


def _required(config: RunConfig, *names: str) -> None:
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(config, name) is None]
    if missing:
        raise UsageError("Missing required flags", {"command": config.command, "missing": missing})


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="seed of generators and retract tie-breaks")
    parser.add_argument("--workers", type=int, default=None, help="worker threads (default: usable CPUs)")
    parser.add_argument("--strict", action="store_true", help="validate retract labels and transporters")
    parser.add_argument("--output", type=Path, default=None, help="artifact path (default: stdout)")
    parser.add_argument("--manifest", type=Path, default=None, help="write a run manifest to this path")
    parser.add_argument(
        "--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="logging threshold"
    )


def _add_budgets(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k-max", type=int, default=4, help="largest extension degree of the OG+ dimension test")
    parser.add_argument("--threshold", type=int, default=12, help="point count marking a positive-dimensional span")
    parser.add_argument("--max-extension", type=int, default=3, help="largest i with #C(F_{2^i}) computed")
    parser.add_argument("--max-points", type=int, default=None, help="point enumeration budget")
    parser.add_argument("--max-evaluations", type=int, default=None, help="per-candidate evaluation budget")
    parser.add_argument("--max-coset-dimension", type=int, default=None, help="largest refinement coset scanned")
    parser.add_argument("--memory-percent", type=float, default=None, help="virtual-memory ceiling in percent")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbitree", description="Orbit lookup trees and Brill-Noether strata over F2")
    groups = parser.add_subparsers(dest="group", required=True)

    tree = groups.add_parser("tree", help="orbit lookup trees").add_subparsers(dest="action", required=True)
    for action in ("build", "verify"):
        sub = tree.add_parser(action)
        sub.add_argument("--space", required=True, help="space id whose F2-points form the domain")
        sub.add_argument("--depth", type=int, required=True, help="subset size")
        sub.add_argument("--oracle", default="none", choices=["none", "independent", "og+"], help="forbidden tuples")
        _add_common(sub)
        _add_budgets(sub)
        if action == "verify":
            sub.add_argument("--tree", type=Path, required=True, help="tree file written by 'tree build'")
            sub.add_argument("--trials", type=int, default=200, help="random subsets looked up")

    geometry = groups.add_parser("geometry", help="point enumeration").add_subparsers(dest="action", required=True)
    points = geometry.add_parser("points")
    points.add_argument("--space", required=True)
    points.add_argument("--ext", type=int, default=1, help="field degree k of F_{2^k}")
    _add_common(points)
    _add_budgets(points)

    strata = groups.add_parser("strata", help="Brill-Noether strata").add_subparsers(dest="action", required=True)
    for action in ("precheck", "run", "genus7-generic"):
        sub = strata.add_parser(action)
        if action == "run":
            sub.add_argument("--stratum", required=True, choices=sorted(STRATA))
        _add_common(sub)
        _add_budgets(sub)
    return parser


def parse_config(argv: Sequence[str] | None = None) -> tuple[RunConfig, str]:
    """Parse and validate flags; returns the config and the log level.

    Raises:
        UsageError: Invalid flag values
    """
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            raise
        raise UsageError("Invalid command line", {"argv": list(argv) if argv is not None else sys.argv[1:]}) from exc
    values = vars(namespace)
    log_level = values.pop("log_level")
    values["command"] = f"{values.pop('group')} {values.pop('action')}"
    if values.get("workers") is None:
        values["workers"] = default_workers()
    try:
        config = RunConfig.model_validate({k: v for k, v in values.items() if v is not None})
    except ValidationError as exc:
        errors = [{"field": ".".join(map(str, e["loc"])), "message": e["msg"]} for e in exc.errors()]
        raise UsageError("Invalid configuration", {"errors": errors}) from exc
    return config, log_level


@contextlib.contextmanager
def _artifact(path: Path | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as stream:
        yield stream


def _tree_oracle(config: RunConfig, space: AmbientSpace, settings: OrbitreeSettings) -> EligibilityOracle | None:
    match config.oracle:
        case "independent":
            return IndependenceOracle(space.enumerate_points(1, settings.budgets))
        case "og+":
            return OrthogonalGrassmannianOracle(settings.og)
        case _:
            return None


def dispatch(config: RunConfig) -> int:
    """Run one command and write its artifacts; returns the exit status."""
    settings = config.settings()
    manifest = RunManifest.for_settings(config.command, settings)
    match config.command:
        case "tree build" | "tree verify":
            _required(config, "space", "depth")
            assert config.space is not None and config.depth is not None
            space = ambient_space(config.space)
            group = automorphism_generators(space, seed=settings.seed).group
            oracle = _tree_oracle(config, space, settings)
            if config.command == "tree build":
                tree = build_tree(group, group.degree, config.depth, oracle, settings)
                with _artifact(config.output) as stream:
                    written = dump_tree(tree, stream)
                manifest.extra = {"nodes": written, "stats": tree.stats().model_dump(mode="json")}
            else:
                _required(config, "tree")
                assert config.tree is not None
                try:
                    with config.tree.open(encoding="utf-8") as stream:
                        tree = load_tree(stream, group, oracle, settings)
                except OSError as exc:
                    raise UsageError("Cannot read tree file", {"path": str(config.tree), "reason": str(exc)}) from exc
                report = verify(tree, config.depth, config.trials)
                with _artifact(config.output) as stream:
                    stream.write(report.model_dump_json() + "\n")
                manifest.extra = report.model_dump(mode="json")
        case "geometry points":
            _required(config, "space")
            assert config.space is not None
            with _artifact(config.output) as stream:
                count = ambient_space(config.space).export_points(config.ext, stream, settings.budgets)
            manifest.extra = {"space": config.space, "field_degree": config.ext, "points": count}
        case "strata precheck":
            manifest.prechecks = precheck_all()
            with _artifact(config.output) as stream:
                for report in manifest.prechecks:
                    stream.write(report.model_dump_json() + "\n")
        case "strata run" | "strata genus7-generic":
            if config.command == "strata run":
                _required(config, "stratum")
                assert config.stratum is not None
                run = execute_stratum(config.stratum, settings)
            else:
                run = genus7_generic_pipeline(settings)
                manifest.extra = {"representatives": GREEN_REPRESENTATIVES}
            with _artifact(config.output) as stream:
                written = write_candidates(run.candidates, stream)
            manifest.reports = [run.report]
            logger.info("Candidates written", extra={"stratum": run.report.stratum, "candidates": written})
            if config.output is not None:
                sys.stdout.write(run.report.model_dump_json() + "\n")
    if config.output is not None:
        manifest.artifacts["output"] = str(config.output)
    if config.manifest is not None:
        manifest.write(config.manifest)
    return 0


def _fail(error: OrbitreeError, status: int) -> int:
    sys.stderr.write(json.dumps(error.to_record(), default=str) + "\n")
    return status


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``orbitree`` console script."""
    try:
        config, log_level = parse_config(argv)
    except UsageError as exc:
        return _fail(exc, EXIT_USAGE)
    logging.basicConfig(level=log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return dispatch(config)
    except UsageError as exc:
        return _fail(exc, EXIT_USAGE)
    except ResourceError as exc:
        return _fail(exc, EXIT_RESOURCE)
    except OrbitreeError as exc:
        logger.debug("Command failed", exc_info=True)
        return _fail(exc, EXIT_FAILURE)
