"""Pydantic models for strata specifications, candidates and reports."""

from __future__ import annotations

from enum import Enum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class PipelineKind(str, Enum):
    """How a stratum is handled."""

    PRECHECK = "precheck"
    PARADIGM = "paradigm"
    GENUS6_GENERIC = "genus6-generic"
    GENUS7_GENERIC = "genus7-generic"


class OracleKind(str, Enum):
    """Forbidden-tuple predicates used while building orbit trees."""

    NONE = "none"
    PLANE_PROJECTIONS = "plane-projections"
    LINE_PROJECTION = "line-projection"
    INDEPENDENT = "independent"
    ORTHOGONAL_GRASSMANNIAN = "og+"


class StratumSpec(BaseModel):
    """One Brill-Noether stratum and the data of its enumeration.

    Attributes:
        stratum_id: Registry key, e.g. ``g6-plane-quintic``
        genus: 6 or 7
        pipeline: How the stratum is handled
        ambients: Ambient space ids scanned (three for the self-adjoint case)
        intermediate_degree: Degree of ``X_1, ..., X_{m-1}``
        intermediate_count: ``m - 1``
        final_degree: Degree of ``X_m``
        sizes: Allowed sizes of the prescribed F2-point set
        oracle: Forbidden-tuple predicate of the orbit tree
        extra_condition: Additional requirement on ``X_1`` (``x1-smooth``)
        symmetry_breaking: Ordering imposed on the defining forms (``ordered-classes``)
        use_group: Whether orbit representatives are used (otherwise all subsets)
    """

    model_config = ConfigDict(frozen=True)

    stratum_id: str
    genus: int = Field(ge=6, le=7)
    pipeline: PipelineKind = PipelineKind.PARADIGM
    ambients: tuple[str, ...] = ()
    intermediate_degree: tuple[int, ...] = ()
    intermediate_count: int = Field(default=0, ge=0)
    final_degree: tuple[int, ...] = ()
    sizes: tuple[int, ...] = ()
    oracle: OracleKind = OracleKind.NONE
    extra_condition: str | None = None
    symmetry_breaking: str | None = None
    use_group: bool = True
    description: str = ""


class FormRecord(BaseModel):
    """One defining form: its degree, the monomial order id and the F2 coefficient bits."""

    model_config = ConfigDict(frozen=True)

    degree: list[int]
    monomial_order: str
    bits: str

    @property
    def coefficients(self) -> int:
        return int(self.bits[::-1], 2) if self.bits else 0


class CandidateScheme(BaseModel):
    """A scheme ``X ∩ X_1 ∩ ... ∩ X_m`` with exactly the prescribed F2-points.

    Attributes:
        stratum: Stratum id
        ambient: Ambient space id
        forms: Defining forms, intermediate ones first
        points: Indices of the prescribed points in the ambient F2 list
        counts: ``#(F_{2^i})`` for ``i = 1, 2, ...``
        flags: ``partial-counts`` when a scan hit its budget
        config_hash: Hash of the settings that produced the record
    """

    model_config = ConfigDict(frozen=True)

    stratum: str
    ambient: str
    forms: list[FormRecord]
    points: list[int]
    counts: list[int] = Field(default_factory=list[int])
    flags: list[str] = Field(default_factory=list[str])
    config_hash: str = ""

    def form_key(self) -> tuple[str, tuple[tuple[tuple[int, ...], str], ...]]:
        """Identity used for syntactic deduplication."""
        return self.ambient, tuple((tuple(f.degree), f.bits) for f in self.forms)


class Exclusion(BaseModel):
    """A tuple ruled out by a point-count inequality."""

    model_config = ConfigDict(frozen=True)

    counts: tuple[int, ...]
    extension: int = Field(ge=1, description="i such that the inequality is over F_{2^i}")
    inequality: str


class PrecheckReport(BaseModel):
    """Verdict of the point-count arguments on one stratum."""

    genus: int
    stratum: str
    verdict: Literal["excluded", "survives", "partial", "external"]
    exclusions: list[Exclusion] = Field(default_factory=list[Exclusion])
    surviving: list[tuple[int, ...]] = Field(default_factory=list[tuple[int, ...]])
    notes: list[str] = Field(default_factory=list[str])

    @property
    def excluded(self) -> bool:
        return self.verdict == "excluded"

    def allowed_rational_counts(self) -> frozenset[int]:
        return frozenset(t[0] for t in self.surviving)


class StratumReport(BaseModel):
    """Counts and timings of one stratum run."""

    stratum: str
    candidates: int = 0
    flagged: int = 0
    representatives: dict[str, int] = Field(default_factory=dict[str, int])
    stages: dict[str, int] = Field(default_factory=dict[str, int])
    timings: dict[str, float] = Field(default_factory=dict[str, float])
    notes: list[str] = Field(default_factory=list[str])
