"""Genus 6, generic stratum: quadric sections of Gr(2,5) ∩ P^5.

The canonical model is cut out of Gr(2,5) in P^9 by four hyperplanes and
one quadric. The hyperplane quadruples are handled first: an orbit tree of
GL(5, 2) on the dual P^9 classifies independent 4-sets of hyperplanes, and
4-sets spanning equivalent linear systems are merged. The quadric is then
refined against every prescribed subset of each section, without using the
group.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from functools import partial
from itertools import combinations

import numpy as np

from hother.orbitree.config import OrbitreeSettings
from hother.orbitree.core.exceptions import PipelineError
from hother.orbitree.core.tree import OrbitTree, build_tree
from hother.orbitree.geometry import gf2
from hother.orbitree.geometry.automorphisms import automorphism_generators
from hother.orbitree.geometry.spaces import ambient_space
from hother.orbitree.strata.linear_systems import common_zeros
from hother.orbitree.strata.models import CandidateScheme, StratumReport
from hother.orbitree.strata.oracles import IndependenceOracle
from hother.orbitree.strata.pipeline import ScanContext, StratumRun, deduplicate, scan_coset
from hother.orbitree.strata.precheck import stratum_precheck
from hother.orbitree.strata.tables import stratum_spec
from hother.orbitree.types import Label
from hother.orbitree.utils.concurrency import map_in_workers
from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)

STRATUM_ID = "g6-generic"
SECTION_CLASSES = 55
HYPERPLANES = 4


@dataclass
class SectionClasses:
    """Equivalence classes of independent hyperplane quadruples.

    Attributes:
        representatives: One green label of the dual-space tree per class
        members: Green labels merged into each class
        report: Counts and timings of the stage
    """

    representatives: list[Label]
    members: list[list[Label]] = field(default_factory=list)
    report: StratumReport = field(default_factory=lambda: StratumReport(stratum=STRATUM_ID))


def _bases_of_span(vectors: list[int], index: dict[int, int]) -> list[Label]:
    """All unordered bases of ``span(vectors)`` as tuples of dual-space indices."""
    nonzero = [v for v in gf2.span_elements(vectors) if v]
    return [
        tuple(index[v] for v in subset)
        for subset in combinations(nonzero, len(vectors))
        if gf2.rank(subset) == len(vectors)
    ]


def classify_sections(tree: OrbitTree, packed: list[int]) -> tuple[list[Label], list[list[Label]]]:
    """Merge green quadruples whose spans lie in one group orbit.

    Every basis of a green node's span is looked up in the tree; all greens
    reached this way share the orbit of that span.
    """
    index = {vector: position for position, vector in enumerate(packed)}
    classified: set[Label] = set()
    representatives: list[Label] = []
    members: list[list[Label]] = []
    for node in tree.greens(HYPERPLANES):
        if node.label in classified:
            continue
        vectors = [packed[p] for p in node.label]
        reached: set[Label] = set()
        for basis in _bases_of_span(vectors, index):
            found = tree.find(basis)
            if found is None:
                raise PipelineError("sections", "Independent quadruple is forbidden", {"basis": list(basis)})
            reached.add(found[0].label)
        classified.update(reached)
        representatives.append(node.label)
        members.append(sorted(reached))
    return representatives, members


def genus6_generic_sections(settings: OrbitreeSettings | None = None, *, expected: int | None = SECTION_CLASSES) -> SectionClasses:
    """The classes of hyperplane quadruples (the intermediate stage).

    Raises:
        PipelineError: The class count differs from ``expected``
    """
    config = settings or OrbitreeSettings()
    dual = ambient_space("dual-p9")
    points = dual.enumerate_points(1, config.budgets)
    report = StratumReport(stratum=STRATUM_ID)
    started = time.perf_counter()
    automorphisms = automorphism_generators(dual, seed=config.seed)
    tree = build_tree(automorphisms.group, len(points), HYPERPLANES, IndependenceOracle(points), config)
    report.timings["tree"] = time.perf_counter() - started
    report.stages["greens"] = len(tree.greens(HYPERPLANES))
    started = time.perf_counter()
    packed = gf2.pack_rows(points.coords)
    representatives, members = classify_sections(tree, packed)
    report.timings["classes"] = time.perf_counter() - started
    report.stages["classes"] = len(representatives)
    logger.info("Hyperplane quadruples classified", extra={"greens": report.stages["greens"], "classes": len(representatives)})
    if expected is not None and len(representatives) != expected:
        raise PipelineError(
            "sections", "Unexpected number of hyperplane classes", {"classes": len(representatives), "expected": expected}
        )
    return SectionClasses(representatives, members, report)


def _refine_section(context: ScanContext, item: tuple[int, list[int]]) -> tuple[list[CandidateScheme], Counter[str]]:
    index, hyperplanes = item
    context.guard.check(section=index)
    forms = context.intermediate_forms
    assert forms is not None
    polynomials = [forms.polynomial(h) for h in hyperplanes]
    on_section = np.flatnonzero(common_zeros(context.points, polynomials)).tolist()
    counter = context.counter_for(polynomials)
    stats: Counter[str] = Counter(section_points=len(on_section))
    found: list[CandidateScheme] = []
    for size in context.spec.sizes:
        if not any(t[0] == size for t in context.allowed):
            continue
        for label in combinations(on_section, size):
            target = context.points.subset(label)
            checkpoint = f"{STRATUM_ID}:section:{index}"
            found.extend(scan_coset(context, target, label, hyperplanes, polynomials, checkpoint, stats, counter))
    return found, stats


def genus6_generic_pipeline(settings: OrbitreeSettings | None = None) -> StratumRun:
    """Candidates of the genus-6 generic stratum.

    Raises:
        PipelineError: The hyperplane stage does not give the expected classes
    """
    config = settings or OrbitreeSettings()
    spec = stratum_spec(STRATUM_ID)
    precheck = stratum_precheck(spec.genus, STRATUM_ID)
    sections = genus6_generic_sections(config)
    report = sections.report
    dual_points = ambient_space("dual-p9").enumerate_points(1, config.budgets)
    packed = gf2.pack_rows(dual_points.coords)
    grassmannian = ambient_space("gr25")
    context = ScanContext.build(spec, grassmannian, precheck.surviving, config)
    items = [(i, [packed[p] for p in label]) for i, label in enumerate(sections.representatives)]
    started = time.perf_counter()
    results = map_in_workers(partial(_refine_section, context), items, config.workers)
    report.timings["quadrics"] = time.perf_counter() - started
    totals: Counter[str] = Counter()
    candidates: list[CandidateScheme] = []
    for batch, stats in results:
        candidates.extend(batch)
        totals.update(stats)
    report.stages.update(sorted(totals.items()))
    report.representatives[grassmannian.space_id] = len(items)
    unique = deduplicate(candidates)
    report.candidates = len(unique)
    report.flagged = sum(1 for c in unique if c.flags)
    logger.info("Stratum enumerated", extra={"stratum": STRATUM_ID, "candidates": report.candidates})
    return StratumRun(unique, report)
