"""Runtime settings.

Settings are plain pydantic models. Only budgets may be overridden from the
environment (``ORBITREE_MAX_POINTS`` and friends); everything else comes from
flags or code.
"""

from __future__ import annotations

import hashlib
import json
import os
from collections.abc import Mapping
from typing import Self

from pydantic import BaseModel, ConfigDict, Field

from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)

_BUDGET_ENV = {
    "max_points": "ORBITREE_MAX_POINTS",
    "max_evaluations": "ORBITREE_MAX_EVALUATIONS",
    "max_coset_dimension": "ORBITREE_MAX_COSET_DIMENSION",
    "memory_percent": "ORBITREE_MEMORY_PERCENT",
}


class Budgets(BaseModel):
    """Resource ceilings applied by enumerators and pipelines."""

    model_config = ConfigDict(frozen=True)

    max_points: int = Field(default=20_000_000, ge=1, description="Largest point set an enumerator may build")
    max_evaluations: int = Field(
        default=20_000_000, ge=1, description="Form evaluations allowed per candidate extension-field scan"
    )
    max_coset_dimension: int = Field(default=24, ge=0, le=40, description="Largest refinement coset enumerated")
    memory_percent: float = Field(default=92.0, gt=0, le=100, description="psutil virtual-memory ceiling")

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None, **overrides: int | float) -> Self:
        """Build budgets from defaults, then environment variables, then explicit overrides."""
        env = os.environ if environ is None else environ
        values: dict[str, int | float] = {}
        for field_name, variable in _BUDGET_ENV.items():
            raw = env.get(variable)
            if raw is None:
                continue
            values[field_name] = float(raw) if field_name == "memory_percent" else int(raw)
            logger.debug("Budget override from environment", extra={"budget": field_name, "variable": variable})
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls.model_validate(values)


class OgOracleSettings(BaseModel):
    """Knobs of the orthogonal-Grassmannian eligibility oracle."""

    model_config = ConfigDict(frozen=True)

    k_max: int = Field(default=4, ge=1, le=6, description="Largest extension degree used by the dimension test")
    threshold: int = Field(default=12, ge=1, description="Point count above which an intersection is positive-dimensional")
    max_rational_points: int = Field(default=7, ge=1, description="Largest allowed number of F2-points on a span")


class OrbitreeSettings(BaseModel):
    """Settings shared by tree construction and the strata pipelines."""

    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1, description="Worker threads for the parallel stages")
    strict: bool = Field(default=False, description="Validate retract labels and transporters while building")
    random_slots: int = Field(default=10, ge=2, description="Product-replacement table size")
    random_burn_in: int = Field(default=50, ge=0, description="Product-replacement warm-up steps")
    exit_rounds: int = Field(default=30, ge=1, description="Quiet sifts before randomized Schreier-Sims stops")
    max_extension_degree: int = Field(default=3, ge=1, le=8, description="Largest i with #C(F_{2^i}) computed")
    budgets: Budgets = Field(default_factory=Budgets)
    og: OgOracleSettings = Field(default_factory=OgOracleSettings)

    def config_hash(self) -> str:
        """Stable short hash of the settings, embedded in every artifact."""
        payload = json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]
