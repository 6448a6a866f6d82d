"""Pydantic models for tree statistics and verification reports."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)


class NodeColor(str, Enum):
    """Color of an orbit-tree node."""

    GREEN = "green"
    RED = "red"
    UNCOLORED = "uncolored"


class Eligibility(str, Enum):
    """Oracle verdict on a tuple."""

    ELIGIBLE = "eligible"
    FORBIDDEN = "forbidden"


class DepthStats(BaseModel):
    """Node counts at one depth of an orbit tree.

    Attributes:
        depth: Subset size
        green: Orbit representatives
        red: Eligible non-representatives
        forbidden: Nodes in ineligible components
        orbit_sum: Sum of [G : G_U] over green nodes
    """

    model_config = ConfigDict(frozen=True)

    depth: int = Field(ge=0)
    green: int = Field(default=0, ge=0)
    red: int = Field(default=0, ge=0)
    forbidden: int = Field(default=0, ge=0)
    orbit_sum: int = Field(default=0, ge=0)

    @property
    def total(self) -> int:
        return self.green + self.red + self.forbidden


class TreeStats(BaseModel):
    """Per-depth statistics of a tree."""

    domain_size: int
    group_order: int
    depths: list[DepthStats] = Field(default_factory=list[DepthStats])

    def green_counts(self) -> list[int]:
        return [d.green for d in self.depths]


class VerificationReport(BaseModel):
    """Outcome of :func:`hother.orbitree.core.tree.verify`.

    Attributes:
        depth: Subset size checked
        trials: Random subsets drawn
        resolved: Subsets mapped onto a green node with a valid transporter
        forbidden: Subsets certified as containing a forbidden subset
        orbit_sum: Sum of [G : G_U] over green nodes
        expected_sum: C(|S|, k), only when nothing is forbidden
        passed: Whether every assertion held
    """

    depth: int
    trials: int
    resolved: int = 0
    forbidden: int = 0
    orbit_sum: int | None = None
    expected_sum: int | None = None
    passed: bool = True

    def log_summary(self) -> None:
        logger.info(
            "Tree verification finished",
            extra={
                "depth": self.depth,
                "trials": self.trials,
                "resolved": self.resolved,
                "forbidden": self.forbidden,
                "orbit_sum": self.orbit_sum,
            },
        )
