"""Point-count arguments that settle strata without any enumeration.

A curve with a map of degree ``d`` to a curve ``B`` has ``#C(F_q) <= d #B(F_q)``
for every ``q``; the allowed tuples are tested against these bounds.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

from hother.orbitree.core.exceptions import DomainError, IntegrityError
from hother.orbitree.strata.models import Exclusion, PipelineKind, PrecheckReport
from hother.orbitree.strata.tables import (
    GENUS6_BIELLIPTIC,
    GENUS7_BIELLIPTIC_ELLIPTIC_COUNTS,
    STRATA,
    point_counts,
    stratum_spec,
)
from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)

SMOOTH_POINTS_P113 = 2 * 2 + 2
"""Smooth F2-points of P(1:1:3): ``q^2 + q`` (the point (0:0:1) is singular)."""


def projective_line_count(i: int) -> int:
    return (1 << i) + 1


def bielliptic_counts(e_f2: int, n: int) -> tuple[int, ...]:
    """``#E(F_{2^i})`` for ``i = 1..n`` from ``#E(F2)``.

    With ``t = 3 - #E(F2)`` the power sums ``s_i`` of the Frobenius
    eigenvalues satisfy ``s_0 = 2, s_1 = t, s_i = t s_{i-1} - 2 s_{i-2}``,
    and ``#E(F_{2^i}) = 2^i + 1 - s_i``.

    Raises:
        DomainError: ``#E(F2)`` outside the Hasse range 1..5
    """
    if not 1 <= e_f2 <= 5:
        raise DomainError("#E(F2) outside the Hasse interval", {"count": e_f2})
    trace = 3 - e_f2
    previous, current = 2, trace
    counts = []
    for i in range(1, n + 1):
        counts.append((1 << i) + 1 - current)
        previous, current = current, trace * current - 2 * previous
    return tuple(counts)


def first_violation(counts: Sequence[int], bound: Callable[[int], int]) -> int | None:
    """Smallest ``i`` with ``counts[i-1] > bound(i)``."""
    for i, count in enumerate(counts, start=1):
        if count > bound(i):
            return i
    return None


def _gonality_exclusions(
    tuples: Sequence[tuple[int, ...]], degree: int
) -> tuple[list[Exclusion], list[tuple[int, ...]]]:
    exclusions: list[Exclusion] = []
    surviving: list[tuple[int, ...]] = []
    for counts in tuples:
        i = first_violation(counts, lambda j: degree * projective_line_count(j))
        if i is None:
            surviving.append(counts)
            continue
        q = 1 << i
        inequality = f"#C(F{q}) = {counts[i - 1]} > {degree * (q + 1)} = {degree}#P1(F{q})"
        exclusions.append(Exclusion(counts=counts, extension=i, inequality=inequality))
    return exclusions, surviving


def _bielliptic_disposition(elliptic: Sequence[int], curve: Sequence[int]) -> tuple[int, str]:
    i = first_violation(curve, lambda j: 2 * elliptic[j - 1])
    if i is not None:
        q = 1 << i
        return i, f"#C(F{q}) > 2#E(F{q})"
    if curve[1] == 2 * elliptic[1]:
        return 2, "#C(F4) = 2#E(F4), #C(F2) odd"
    raise IntegrityError("Bielliptic row has no disposition", context={"elliptic": list(elliptic), "curve": list(curve)})


def _genus6_bielliptic() -> PrecheckReport:
    exclusions = []
    for row in GENUS6_BIELLIPTIC:
        derived = bielliptic_counts(row.elliptic[0], 4)
        if derived != row.elliptic:
            raise IntegrityError(
                "Elliptic counts disagree with the trace recurrence",
                context={"table": list(row.elliptic), "derived": list(derived)},
            )
        extension, disposition = _bielliptic_disposition(row.elliptic, row.curve)
        if disposition != row.disposition:
            raise IntegrityError(
                "Derived disposition differs from the table",
                context={"row": list(row.curve), "derived": disposition, "table": row.disposition},
            )
        exclusions.append(
            Exclusion(counts=row.curve, extension=extension, inequality=f"E {row.elliptic}: {disposition}")
        )
    return PrecheckReport(
        genus=6,
        stratum="g6-bielliptic",
        verdict="excluded",
        exclusions=exclusions,
        notes=[
            "Only the listed prefixes pass the resultant criterion.",
            "Equality #C(F4) = 2#E(F4) forbids ramification over degree-1 places; the parity of #C(F2) then rules the row out.",
        ],
    )


def _genus7_bielliptic() -> PrecheckReport:
    tuples = [t for t in point_counts(7) if t[0] == 6]
    exclusions: list[Exclusion] = []
    remaining: list[int] = []
    for e_f2 in GENUS7_BIELLIPTIC_ELLIPTIC_COUNTS:
        elliptic = bielliptic_counts(e_f2, 7)
        violations = [(t, first_violation(t, lambda j, e=elliptic: 2 * e[j - 1])) for t in tuples]
        if all(i is not None for _, i in violations):
            for counts, i in violations:
                assert i is not None
                q = 1 << i
                inequality = f"#E(F2) = {e_f2}: #C(F{q}) = {counts[i - 1]} > {2 * elliptic[i - 1]} = 2#E(F{q})"
                exclusions.append(Exclusion(counts=counts, extension=i, inequality=inequality))
        else:
            remaining.append(e_f2)
    return PrecheckReport(
        genus=7,
        stratum="g7-bielliptic",
        verdict="external",
        exclusions=exclusions,
        surviving=tuples,
        notes=[
            "The resultant criterion leaves #C(F2) = 6 and #E(F2) in {3, 5}.",
            f"Remaining elliptic counts {remaining}: requires external verification (double covers of E).",
        ],
    )


def stratum_precheck(genus: int, stratum_id: str) -> PrecheckReport:
    """Verdict of the point-count arguments on one stratum.

    Raises:
        DomainError: Unknown stratum, or a stratum of another genus
    """
    spec = stratum_spec(stratum_id)
    if spec.genus != genus:
        raise DomainError("Stratum belongs to another genus", {"stratum": stratum_id, "genus": genus})
    tuples = list(point_counts(genus))
    match stratum_id:
        case "g6-hyperelliptic" | "g7-hyperelliptic":
            exclusions, surviving = _gonality_exclusions(tuples, 2)
            report = PrecheckReport(
                genus=genus,
                stratum=stratum_id,
                verdict="excluded" if not surviving else "partial",
                exclusions=exclusions,
                surviving=surviving,
            )
        case "g6-bielliptic":
            report = _genus6_bielliptic()
        case "g7-bielliptic":
            report = _genus7_bielliptic()
        case "g7-trigonal-maroni1" | "g7-trigonal-maroni3":
            exclusions, surviving = _gonality_exclusions(tuples, 3)
            if stratum_id == "g7-trigonal-maroni3":
                for counts in surviving:
                    inequality = f"#C(F2) = {counts[0]} > {SMOOTH_POINTS_P113} = smooth points of P(1:1:3)(F2)"
                    if counts[0] > SMOOTH_POINTS_P113:
                        exclusions.append(Exclusion(counts=counts, extension=1, inequality=inequality))
                surviving = [t for t in surviving if t[0] <= SMOOTH_POINTS_P113]
            verdict = "excluded" if not surviving else "partial" if exclusions else "survives"
            report = PrecheckReport(
                genus=genus, stratum=stratum_id, verdict=verdict, exclusions=exclusions, surviving=surviving
            )
        case _:
            report = PrecheckReport(genus=genus, stratum=stratum_id, verdict="survives", surviving=tuples)
    logger.info(
        "Precheck evaluated",
        extra={"stratum": stratum_id, "verdict": report.verdict, "excluded": len(report.exclusions)},
    )
    return report


def precheck_all() -> list[PrecheckReport]:
    """Reports for every registered stratum, genus 6 first."""
    return [stratum_precheck(spec.genus, spec.stratum_id) for spec in STRATA.values()]


def enumerated_strata() -> list[str]:
    """Strata that need an enumeration after the precheck."""
    return [s.stratum_id for s in STRATA.values() if s.pipeline is not PipelineKind.PRECHECK]
