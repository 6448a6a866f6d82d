"""Genus 7, generic stratum: linear sections of OG+ by 6-planes of P^15.

An orbit tree of SO(V)(F2) on the 2295 F2-points of OG+ gives the 6-point
configurations ``V``; each spans a 4-plane or a 5-plane. The 6-planes
through that span are then hashed by the remaining F2-points of OG+, keyed
by the class of a point modulo the span (two points lie in the same
6-plane through a 5-plane exactly when their classes agree).
"""

from __future__ import annotations

import time
from collections import Counter
from collections.abc import Sequence
from enum import Enum

import numpy as np

from hother.orbitree.config import OrbitreeSettings
from hother.orbitree.core.exceptions import PipelineError
from hother.orbitree.core.tree import build_tree
from hother.orbitree.geometry import gf2, spinor
from hother.orbitree.geometry.forms import FormSpace
from hother.orbitree.geometry.sections import QuadricSection, local_intersection_multiplicity
from hother.orbitree.geometry.spaces import ambient_space
from hother.orbitree.strata.linear_systems import PARTIAL_COUNTS, form_record
from hother.orbitree.strata.models import CandidateScheme, StratumReport
from hother.orbitree.strata.oracles import OrthogonalGrassmannianOracle
from hother.orbitree.strata.pipeline import StratumRun, deduplicate, extends_allowed
from hother.orbitree.strata.precheck import stratum_precheck
from hother.orbitree.types import Label
from hother.orbitree.utils.concurrency import map_in_workers
from hother.orbitree.utils.logging import get_logger
from hother.orbitree.utils.resources import MemoryGuard

logger = get_logger(__name__)

STRATUM_ID = "g7-generic"
TREE_DEPTH = 6
GREEN_REPRESENTATIVES = 494
PLANE_DIMENSION = 7
"""Vector dimension of the 6-planes cutting the canonical curve out of OG+."""
WIDTH = 16


class SpanCase(str, Enum):
    """How a representative is extended to 6-planes."""

    SEVEN_IN_FOUR_PLANE = "seven-in-4-plane"
    SIX_IN_FIVE_PLANE = "six-in-5-plane"
    SEVEN_FROM_FIVE_PLANE = "seven-from-5-plane"
    SIX_IN_FOUR_PLANE = "six-in-4-plane"
    SEVEN_IN_FIVE_PLANE = "seven-in-5-plane"
    SKIPPED = "skipped"


class PlaneHash:
    """The F2-points of OG+ keyed by their class modulo a span."""

    def __init__(self, span: Sequence[int], vectors: Sequence[int]):
        self.span = gf2.rref(span)
        self.hits: Counter[int] = Counter()
        self.inside: list[int] = []
        for position, vector in enumerate(vectors):
            remainder = gf2.reduce(vector, self.span)
            if remainder:
                self.hits[remainder] += 1
            else:
                self.inside.append(position)

    def empty_classes(self) -> list[int]:
        """Nonzero classes (reduced representatives) met by no point, in increasing order."""
        codimension = WIDTH - len(self.span)
        pivots = {gf2.pivot(b) for b in self.span}
        free = [j for j in range(WIDTH) if j not in pivots]
        assert len(free) == codimension
        result = []
        for code in range(1, 1 << codimension):
            vector = 0
            for offset, column in enumerate(free):
                if code >> offset & 1:
                    vector |= 1 << column
            if vector not in self.hits:
                result.append(vector)
        result.sort()
        return result

    def classes_hit(self, times: int) -> list[int]:
        return sorted(c for c, n in self.hits.items() if n == times)


def triple_planes(empty: Sequence[int]) -> list[tuple[int, int]]:
    """Pairs ``r1 < r2`` with ``r1 < r2 < r1 ^ r2`` and all three classes empty.

    Each pair names the 2-dimensional extension of the span whose three
    intermediate planes carry no further point.
    """
    classes = np.asarray(sorted(empty), dtype=np.int64)
    pairs: list[tuple[int, int]] = []
    for position, first in enumerate(classes.tolist()):
        seconds = classes[position + 1 :]
        sums = seconds ^ first
        keep = (sums > seconds) & np.isin(sums, classes)
        pairs.extend((first, int(second)) for second in seconds[keep])
    return pairs


class Genus7Search:
    """Extension of the depth-6 representatives to candidate 6-planes."""

    def __init__(self, settings: OrbitreeSettings, allowed: Sequence[tuple[int, ...]]):
        self.settings = settings
        self.allowed = list(allowed)
        self.points = spinor.og_points(1)
        self.vectors = gf2.pack_rows(self.points.coords)
        self.index = {v: i for i, v in enumerate(self.vectors)}
        self.quadrics = spinor.spinor_quadrics()
        self.linear_forms = FormSpace(ambient_space("og+").form_ambient(), (1,))
        self.config_hash = settings.config_hash()
        self.guard = MemoryGuard(settings.budgets.memory_percent, STRATUM_ID, f"{STRATUM_ID}:planes")

    def classify(self, label: Label) -> tuple[list[int], PlaneHash]:
        span = gf2.rref(self.vectors[p] for p in label)
        return span, PlaneHash(span, self.vectors)

    def _rows(self, basis: Sequence[int]) -> np.ndarray:
        return np.array([gf2.unpack(b, WIDTH) for b in basis], dtype=np.uint8)

    def counts(self, basis: Sequence[int], rational: int) -> tuple[list[int], bool] | None:
        """Counts of a 6-plane section over F_{2^i}, or ``None`` once the prefix leaves the table."""
        prefix = [rational]
        if not extends_allowed(prefix, self.allowed):
            return None
        section = QuadricSection(self._rows(basis), self.quadrics)
        budgets = self.settings.budgets
        evaluations = 0
        for i in range(2, self.settings.max_extension_degree + 1):
            q = 1 << i
            evaluations += (q**PLANE_DIMENSION - 1) // (q - 1)
            if evaluations > budgets.max_evaluations:
                return prefix, True
            prefix.append(section.count(i))
            if not extends_allowed(prefix, self.allowed):
                return None
        return prefix, False

    def candidate(self, span: Sequence[int], extension: Sequence[int], stats: Counter[str]) -> CandidateScheme | None:
        basis = gf2.rref([*span, *extension])
        if len(basis) != PLANE_DIMENSION:
            raise PipelineError("planes", "Extension does not give a 6-plane", {"dimension": len(basis)})
        on_plane = sorted(self.index[v] for v in gf2.span_elements(basis) if v in self.index)
        result = self.counts(basis, len(on_plane))
        stats["planes"] += 1
        if result is None:
            return None
        counts, partial_counts = result
        forms = gf2.kernel(basis, WIDTH)
        return CandidateScheme(
            stratum=STRATUM_ID,
            ambient="og+",
            forms=[form_record(self.linear_forms, f) for f in forms],
            points=on_plane,
            counts=counts,
            flags=[PARTIAL_COUNTS] if partial_counts else [],
            config_hash=self.config_hash,
        )

    def _maximal_at_extra_point(self, label: Label, span: Sequence[int], inside: Sequence[int]) -> bool:
        extra = [p for p in inside if p not in label]
        if len(extra) != 1:
            raise PipelineError("multiplicity", "Expected exactly one extra point", {"label": list(label)})
        rows = self._rows(span)
        multiplicities = {
            p: local_intersection_multiplicity(rows, self.points.coords[p], self.quadrics) for p in inside
        }
        return multiplicities[extra[0]] == max(multiplicities.values())

    def extend(self, item: tuple[int, Label]) -> tuple[list[CandidateScheme], Counter[str]]:
        """Candidates grown from one representative."""
        index, label = item
        self.guard.check(representative=index)
        span, table = self.classify(label)
        stats: Counter[str] = Counter()
        found: list[CandidateScheme] = []
        rational = len(table.inside)
        sizes = {t[0] for t in self.allowed}

        def emit(extension: Sequence[int]) -> None:
            record = self.candidate(span, extension, stats)
            if record is not None:
                found.append(record)

        if len(span) == 5:
            if 7 in sizes and rational != 6:
                raise PipelineError(
                    "seven-in-4-plane", "A 4-plane span contains a seventh point", {"label": list(label), "points": rational}
                )
            stats[SpanCase.SEVEN_IN_FOUR_PLANE.value] += 1
            if 6 in sizes and rational == 6:
                stats[SpanCase.SIX_IN_FOUR_PLANE.value] += 1
                for first, second in triple_planes(table.empty_classes()):
                    emit((first, second))
            return found, stats
        if rational == 6:
            if 6 in sizes:
                stats[SpanCase.SIX_IN_FIVE_PLANE.value] += 1
                for remainder in table.empty_classes():
                    emit((remainder,))
            if 7 in sizes:
                stats[SpanCase.SEVEN_FROM_FIVE_PLANE.value] += 1
                for remainder in table.classes_hit(1):
                    emit((remainder,))
            return found, stats
        if 7 in sizes and self._maximal_at_extra_point(label, span, table.inside):
            stats[SpanCase.SEVEN_IN_FIVE_PLANE.value] += 1
            for remainder in table.empty_classes():
                emit((remainder,))
        else:
            stats[SpanCase.SKIPPED.value] += 1
        return found, stats


def genus7_representatives(settings: OrbitreeSettings | None = None, *, expected: int | None = GREEN_REPRESENTATIVES) -> list[Label]:
    """Depth-6 green labels of the OG+ tree, with the count and span checks.

    Raises:
        PipelineError: The green count differs from ``expected``, or a
            representative spans neither a 4-plane nor a 5-plane
    """
    config = settings or OrbitreeSettings()
    group, _ = spinor.so_generators(config.seed)
    oracle = OrthogonalGrassmannianOracle(config.og)
    tree = build_tree(group, group.degree, TREE_DEPTH, oracle, config)
    labels = [node.label for node in tree.greens(TREE_DEPTH)]
    if expected is not None and len(labels) != expected:
        raise PipelineError("tree", "Unexpected number of orbit representatives", {"greens": len(labels), "expected": expected})
    vectors = gf2.pack_rows(spinor.og_points(1).coords)
    for label in labels:
        dimension = gf2.rank(vectors[p] for p in label)
        if dimension not in (5, 6):
            raise PipelineError("spans", "Representative spans neither a 4-plane nor a 5-plane", {"label": list(label), "dimension": dimension})
    logger.info("Genus-7 representatives built", extra={"greens": len(labels)})
    return labels


def genus7_generic_pipeline(settings: OrbitreeSettings | None = None) -> StratumRun:
    """Representatives, the five span cases, and the candidate 6-planes.

    Raises:
        PipelineError: A checked count or span property fails; names the stage
    """
    config = settings or OrbitreeSettings()
    precheck = stratum_precheck(7, STRATUM_ID)
    report = StratumReport(stratum=STRATUM_ID)
    started = time.perf_counter()
    labels = genus7_representatives(config)
    report.timings["tree"] = time.perf_counter() - started
    report.representatives["og+"] = len(labels)
    search = Genus7Search(config, precheck.surviving)
    started = time.perf_counter()
    results = map_in_workers(search.extend, list(enumerate(labels)), config.workers)
    report.timings["planes"] = time.perf_counter() - started
    totals: Counter[str] = Counter()
    candidates: list[CandidateScheme] = []
    for batch, stats in results:
        candidates.extend(batch)
        totals.update(stats)
    report.stages.update(sorted(totals.items()))
    unique = deduplicate(candidates)
    report.candidates = len(unique)
    report.flagged = sum(1 for c in unique if c.flags)
    logger.info("Stratum enumerated", extra={"stratum": STRATUM_ID, "candidates": report.candidates})
    return StratumRun(unique, report)
