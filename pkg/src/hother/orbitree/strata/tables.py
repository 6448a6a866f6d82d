"""Published point-count data and the registry of Brill-Noether strata.

Tuples list ``#C(F_{2^i})`` for ``i = 1..g``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from hother.orbitree.core.exceptions import DomainError
from hother.orbitree.strata.models import OracleKind, PipelineKind, StratumSpec

GENUS6_COUNTS: tuple[tuple[int, ...], ...] = (
    (4, 14, 16, 18, 14, 92),
    (4, 14, 16, 18, 24, 68),
    (4, 14, 16, 26, 14, 68),
    (4, 16, 16, 20, 9, 64),
    (5, 11, 11, 31, 20, 65),
    (5, 11, 11, 31, 20, 77),
    (5, 11, 11, 31, 20, 89),
    (5, 11, 11, 31, 30, 53),
    (5, 11, 11, 31, 30, 65),
    (5, 11, 11, 31, 30, 77),
    (5, 11, 11, 31, 30, 89),
    (5, 11, 11, 31, 40, 53),
    (5, 11, 11, 31, 40, 65),
    (5, 11, 11, 39, 20, 53),
    (5, 11, 11, 39, 20, 65),
    (5, 13, 14, 25, 15, 70),
    (5, 13, 14, 25, 15, 82),
    (5, 13, 14, 25, 15, 94),
    (5, 13, 14, 25, 25, 46),
    (5, 13, 14, 25, 25, 58),
    (5, 13, 14, 25, 25, 70),
    (5, 15, 5, 35, 20, 45),
    (6, 10, 9, 38, 11, 79),
    (6, 10, 9, 38, 21, 67),
    (6, 10, 9, 38, 31, 55),
    (6, 14, 6, 26, 26, 68),
    (6, 14, 6, 26, 26, 80),
    (6, 14, 6, 26, 36, 56),
    (6, 14, 6, 34, 16, 56),
    (6, 14, 6, 34, 26, 44),
    (6, 14, 12, 26, 6, 44),
    (6, 14, 12, 26, 6, 56),
    (6, 14, 12, 26, 6, 66),
)

GENUS7_COUNTS: tuple[tuple[int, ...], ...] = (
    (6, 18, 12, 18, 6, 60, 174),
    (6, 18, 12, 18, 6, 72, 132),
    (6, 18, 12, 18, 6, 84, 90),
    (7, 15, 7, 31, 12, 69, 126),
    (7, 15, 7, 31, 22, 45, 112),
    (7, 15, 7, 31, 22, 57, 70),
    (7, 15, 7, 31, 22, 57, 84),
)

POINT_COUNTS: dict[int, tuple[tuple[int, ...], ...]] = {6: GENUS6_COUNTS, 7: GENUS7_COUNTS}


def point_counts(genus: int) -> tuple[tuple[int, ...], ...]:
    """Allowed tuples for ``genus`` (6 or 7); empty for any other genus."""
    return POINT_COUNTS.get(genus, ())


def rational_counts(genus: int) -> frozenset[int]:
    """Allowed values of ``#C(F2)``."""
    return frozenset(t[0] for t in point_counts(genus))


def table2_filter(prefix: Sequence[int], genus: int) -> bool:
    """Whether some allowed tuple of ``genus`` starts with ``prefix``."""
    head = tuple(prefix)
    if len(head) > genus:
        return False
    return any(t[: len(head)] == head for t in point_counts(genus))


@dataclass(frozen=True)
class BiellipticRow:
    """One row of the genus-6 bielliptic table.

    Attributes:
        elliptic: ``#E(F_{2^i})`` for ``i = 1..4``
        curve: ``#C(F_{2^i})`` for ``i = 1..4``
        disposition: The published reason the row is impossible
    """

    elliptic: tuple[int, int, int, int]
    curve: tuple[int, int, int, int]
    disposition: str


# Row two reads (5, 13, 14, 25): the allowed-tuple prefix. A third entry of 41
# would already violate the F8 inequality.
GENUS6_BIELLIPTIC: tuple[BiellipticRow, ...] = (
    BiellipticRow((1, 5, 13, 25), (6, 10, 9, 38), "#C(F2) > 2#E(F2)"),
    BiellipticRow((3, 9, 9, 9), (5, 13, 14, 25), "#C(F16) > 2#E(F16)"),
    BiellipticRow((3, 9, 9, 9), (6, 10, 9, 38), "#C(F16) > 2#E(F16)"),
    BiellipticRow((5, 5, 5, 25), (5, 13, 14, 25), "#C(F4) > 2#E(F4)"),
    BiellipticRow((5, 5, 5, 25), (6, 10, 9, 38), "#C(F4) = 2#E(F4), #C(F2) odd"),
)

GENUS7_BIELLIPTIC_ELLIPTIC_COUNTS: tuple[int, ...] = (3, 5)
"""Values of ``#E(F2)`` left by the resultant criterion for genus 7 (where ``#C(F2) = 6``)."""


def _registry() -> dict[str, StratumSpec]:
    g6 = (4, 5, 6)
    g7 = (6, 7)
    specs = [
        StratumSpec(stratum_id="g6-hyperelliptic", genus=6, pipeline=PipelineKind.PRECHECK),
        StratumSpec(stratum_id="g6-bielliptic", genus=6, pipeline=PipelineKind.PRECHECK),
        StratumSpec(
            stratum_id="g6-trigonal-maroni2",
            genus=6,
            ambients=("x21",),
            final_degree=(1, 3),
            sizes=g6,
            description="trigonal, Maroni invariant 2",
        ),
        StratumSpec(
            stratum_id="g6-trigonal-maroni0",
            genus=6,
            ambients=("p1xp1",),
            final_degree=(3, 4),
            sizes=g6,
            description="trigonal, Maroni invariant 0",
        ),
        StratumSpec(
            stratum_id="g6-plane-quintic",
            genus=6,
            ambients=("p2",),
            final_degree=(5,),
            sizes=g6,
            description="plane quintic",
        ),
        StratumSpec(
            stratum_id="g6-generic",
            genus=6,
            pipeline=PipelineKind.GENUS6_GENERIC,
            ambients=("gr25",),
            intermediate_degree=(1,),
            intermediate_count=4,
            final_degree=(2,),
            sizes=g6,
            oracle=OracleKind.INDEPENDENT,
            description="generic: linear sections of Gr(2,5)",
        ),
        StratumSpec(stratum_id="g7-hyperelliptic", genus=7, pipeline=PipelineKind.PRECHECK),
        StratumSpec(stratum_id="g7-trigonal-maroni3", genus=7, pipeline=PipelineKind.PRECHECK),
        StratumSpec(stratum_id="g7-bielliptic", genus=7, pipeline=PipelineKind.PRECHECK),
        StratumSpec(
            stratum_id="g7-trigonal-maroni1",
            genus=7,
            ambients=("p1xp2",),
            intermediate_degree=(1, 1),
            intermediate_count=1,
            final_degree=(3, 3),
            sizes=g7,
            extra_condition="x1-smooth",
            description="trigonal, Maroni invariant 1",
        ),
        StratumSpec(
            stratum_id="g7-self-adjoint",
            genus=7,
            ambients=("x3-1", "x3-2", "x3-3"),
            final_degree=(4,),
            sizes=g7,
            use_group=False,
            description="self-adjoint g^2_6",
        ),
        StratumSpec(
            stratum_id="g7-rational-g26",
            genus=7,
            ambients=("p2xp2",),
            intermediate_degree=(1, 1),
            intermediate_count=2,
            final_degree=(2, 2),
            sizes=g7,
            oracle=OracleKind.PLANE_PROJECTIONS,
            description="rational g^2_6 pair",
        ),
        StratumSpec(
            stratum_id="g7-irrational-g26",
            genus=7,
            ambients=("twist",),
            intermediate_degree=(1, 1),
            intermediate_count=2,
            final_degree=(2, 2),
            sizes=g7,
            description="irrational g^2_6 pair",
        ),
        StratumSpec(
            stratum_id="g7-tetragonal",
            genus=7,
            ambients=("x11",),
            intermediate_degree=(1, 2),
            intermediate_count=1,
            final_degree=(1, 2),
            sizes=g7,
            oracle=OracleKind.LINE_PROJECTION,
            symmetry_breaking="ordered-classes",
            description="tetragonal, no g^2_6",
        ),
        StratumSpec(
            stratum_id="g7-generic",
            genus=7,
            pipeline=PipelineKind.GENUS7_GENERIC,
            ambients=("og+",),
            intermediate_degree=(1,),
            intermediate_count=8,
            final_degree=(1,),
            sizes=g7,
            oracle=OracleKind.ORTHOGONAL_GRASSMANNIAN,
            description="generic: linear sections of OG+",
        ),
    ]
    return {spec.stratum_id: spec for spec in specs}


STRATA: dict[str, StratumSpec] = _registry()


def stratum_spec(stratum_id: str) -> StratumSpec:
    """Registered stratum.

    Raises:
        DomainError: Unknown id
    """
    spec = STRATA.get(stratum_id)
    if spec is None:
        raise DomainError("Unknown stratum id", {"stratum": stratum_id, "known": sorted(STRATA)})
    return spec
