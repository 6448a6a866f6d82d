"""The enumeration paradigm shared by the Brill-Noether strata.

For each stratum: orbit representatives of prescribed F2-point sets (an
orbit tree under the automorphism group of the ambient space, or all subsets
when the group is ignored), then intermediate forms through them, then the
exact refinement of the final form, then point counts over extensions
checked against the allowed tuples.
"""

from __future__ import annotations

import time
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass
from functools import partial
from itertools import combinations

from hother.orbitree.config import OrbitreeSettings
from hother.orbitree.core.tree import build_tree
from hother.orbitree.geometry import gf2
from hother.orbitree.geometry.automorphisms import automorphism_generators
from hother.orbitree.geometry.forms import FormSpace, Polynomial
from hother.orbitree.geometry.spaces import AmbientSpace, PointSet, ambient_space
from hother.orbitree.strata.linear_systems import (
    PARTIAL_COUNTS,
    SectionCounter,
    common_zeros,
    exact_point_refinement,
    form_record,
    hypersurfaces_through,
    ideal_part,
    reduce_modulo,
    subspaces,
)
from hother.orbitree.strata.models import CandidateScheme, PipelineKind, StratumReport, StratumSpec
from hother.orbitree.strata.oracles import eligibility_oracle_for
from hother.orbitree.strata.precheck import stratum_precheck
from hother.orbitree.strata.tables import stratum_spec
from hother.orbitree.types import EligibilityOracle, Label, allow_all
from hother.orbitree.utils.concurrency import map_in_workers
from hother.orbitree.utils.logging import get_logger
from hother.orbitree.utils.resources import MemoryGuard

logger = get_logger(__name__)


@dataclass
class StratumRun:
    """Candidates of one stratum with the report of the run."""

    candidates: list[CandidateScheme]
    report: StratumReport


@dataclass
class ScanContext:
    """Read-only data shared by the work items of one ambient space."""

    spec: StratumSpec
    space: AmbientSpace
    points: PointSet
    allowed: list[tuple[int, ...]]
    settings: OrbitreeSettings
    final_forms: FormSpace
    intermediate_forms: FormSpace | None
    intermediate_ideal: list[int]
    ambient_final_ideal: list[int]
    guard: MemoryGuard
    config_hash: str
    shared_counter: SectionCounter | None = None

    @classmethod
    def build(
        cls, spec: StratumSpec, space: AmbientSpace, allowed: Sequence[tuple[int, ...]], settings: OrbitreeSettings
    ) -> ScanContext:
        intermediate = spec.intermediate_count > 0
        final_forms = space.forms(spec.final_degree)
        context = cls(
            spec=spec,
            space=space,
            points=space.enumerate_points(1, settings.budgets),
            allowed=list(allowed),
            settings=settings,
            final_forms=final_forms,
            intermediate_forms=space.forms(spec.intermediate_degree) if intermediate else None,
            intermediate_ideal=ideal_part(space, spec.intermediate_degree) if intermediate else [],
            ambient_final_ideal=ideal_part(space, spec.final_degree),
            guard=MemoryGuard(settings.budgets.memory_percent, spec.stratum_id, f"{spec.stratum_id}:{space.space_id}"),
            config_hash=settings.config_hash(),
        )
        if not intermediate:
            context.shared_counter = SectionCounter(
                space, final_forms, (), settings.max_extension_degree, settings.budgets
            )
        return context

    def counter_for(self, polynomials: Sequence[Polynomial]) -> SectionCounter:
        """Extension-field counter of the partial intersection cut by ``polynomials``."""
        if self.shared_counter is not None and not polynomials:
            return self.shared_counter
        return SectionCounter(
            self.space, self.final_forms, polynomials, self.settings.max_extension_degree, self.settings.budgets
        )


def extends_allowed(prefix: Sequence[int], allowed: Sequence[tuple[int, ...]]) -> bool:
    head = tuple(prefix)
    return any(t[: len(head)] == head for t in allowed)


def is_x1_smooth(coefficients: int) -> bool:
    """A (1,1)-form on P1 x P2 has a 2 x 3 coefficient matrix (rows ``x0``, ``x1``) of rank 2."""
    return gf2.rank([coefficients & 0b111, coefficients >> 3 & 0b111]) == 2


def representatives(
    spec: StratumSpec,
    space: AmbientSpace,
    sizes: Sequence[int],
    settings: OrbitreeSettings,
) -> list[Label]:
    """Prescribed point sets to scan: green labels of an orbit tree, or all eligible subsets."""
    if not sizes:
        return []
    points = space.enumerate_points(1, settings.budgets)
    oracle: EligibilityOracle = eligibility_oracle_for(spec, settings.og)
    if not spec.use_group:
        return [label for size in sizes for label in combinations(range(len(points)), size) if oracle(label)]
    symmetric = len(set(spec.final_degree)) <= 1 and len(set(spec.intermediate_degree)) <= 1
    automorphisms = automorphism_generators(space, seed=settings.seed, with_swap=symmetric)
    tree = build_tree(
        automorphisms.group, len(points), max(sizes), None if oracle is allow_all else oracle, settings
    )
    return [node.label for size in sizes for node in tree.greens(size)]


def scan_coset(
    context: ScanContext,
    target: PointSet,
    label: Label,
    intermediates: Sequence[int],
    polynomials: Sequence[Polynomial],
    checkpoint: str,
    stats: Counter[str],
    counter: SectionCounter | None = None,
) -> list[CandidateScheme]:
    """Candidates whose final form exactly refines the partial intersection to ``target``."""
    spec = context.spec
    section_mask = common_zeros(context.points, polynomials)
    section = context.points.subset(section_mask.nonzero()[0])
    ideal = ideal_part(context.space, spec.final_degree, polynomials) if polynomials else context.ambient_final_ideal
    coset = exact_point_refinement(
        context.final_forms, section, target, ideal, budgets=context.settings.budgets, checkpoint=checkpoint
    )
    stats["cosets"] += 1
    if coset.empty:
        return []
    counter = counter or context.counter_for(polynomials)
    ordered = spec.symmetry_breaking == "ordered-classes"
    first_class = gf2.reduce(intermediates[0], context.ambient_final_ideal) if ordered else 0
    records = [form_record(context.intermediate_forms, c) for c in intermediates] if context.intermediate_forms else []
    found: list[CandidateScheme] = []
    for element, values in counter.scan(coset):
        stats["scanned"] += 1
        if ordered:
            final_class = gf2.reduce(element, context.ambient_final_ideal)
            if not (first_class < final_class and first_class < final_class ^ first_class):
                continue
        prefix: list[int] = []
        for vector in values:
            prefix.append(int((vector == 0).sum()))
            if not extends_allowed(prefix, context.allowed):
                break
        else:
            found.append(
                CandidateScheme(
                    stratum=spec.stratum_id,
                    ambient=context.space.space_id,
                    forms=[*records, form_record(context.final_forms, element)],
                    points=sorted(label),
                    counts=prefix,
                    flags=[PARTIAL_COUNTS] if counter.partial else [],
                    config_hash=context.config_hash,
                )
            )
    return found


def _process(context: ScanContext, item: tuple[int, Label]) -> tuple[list[CandidateScheme], Counter[str]]:
    index, label = item
    checkpoint = f"{context.spec.stratum_id}:{context.space.space_id}:{index}"
    context.guard.check(representative=index)
    spec = context.spec
    target = context.points.subset(label)
    stats: Counter[str] = Counter()
    if spec.intermediate_count == 0 or context.intermediate_forms is None:
        return scan_coset(context, target, label, (), (), checkpoint, stats), stats
    through = hypersurfaces_through(target, spec.intermediate_degree, context.space)
    quotient = reduce_modulo(through, context.intermediate_ideal)
    found: list[CandidateScheme] = []
    for basis in subspaces(quotient, spec.intermediate_count):
        if spec.extra_condition == "x1-smooth" and not all(is_x1_smooth(c) for c in basis):
            continue
        polynomials = [context.intermediate_forms.polynomial(c) for c in basis]
        found.extend(scan_coset(context, target, label, basis, polynomials, checkpoint, stats))
    return found, stats


def deduplicate(candidates: Sequence[CandidateScheme]) -> list[CandidateScheme]:
    """Drop repeated form tuples, keeping the first occurrence."""
    seen: set[tuple[str, tuple[tuple[tuple[int, ...], str], ...]]] = set()
    unique: list[CandidateScheme] = []
    for candidate in candidates:
        key = candidate.form_key()
        if key not in seen:
            seen.add(key)
            unique.append(candidate)
    return unique


def run_paradigm(
    spec: StratumSpec,
    settings: OrbitreeSettings | None = None,
    *,
    sizes: Sequence[int] | None = None,
) -> StratumRun:
    """Candidates of a stratum handled by the common paradigm.

    Args:
        spec: Stratum with ``pipeline == paradigm``
        settings: Seeds, budgets and worker count
        sizes: Restrict the prescribed-set sizes (reduced-scale runs)
    """
    config = settings or OrbitreeSettings()
    precheck = stratum_precheck(spec.genus, spec.stratum_id)
    allowed = list(precheck.surviving)
    rational = precheck.allowed_rational_counts()
    chosen = [s for s in (sizes if sizes is not None else spec.sizes) if s in rational]
    report = StratumReport(stratum=spec.stratum_id)
    candidates: list[CandidateScheme] = []
    for ambient_id in spec.ambients:
        space = ambient_space(ambient_id)
        started = time.perf_counter()
        labels = representatives(spec, space, chosen, config)
        report.timings[f"{ambient_id}:representatives"] = time.perf_counter() - started
        report.representatives[ambient_id] = len(labels)
        context = ScanContext.build(spec, space, allowed, config)
        started = time.perf_counter()
        results = map_in_workers(partial(_process, context), list(enumerate(labels)), config.workers)
        report.timings[f"{ambient_id}:systems"] = time.perf_counter() - started
        totals: Counter[str] = Counter()
        for batch, stats in results:
            candidates.extend(batch)
            totals.update(stats)
        for key, value in sorted(totals.items()):
            report.stages[f"{ambient_id}:{key}"] = value
    unique = deduplicate(candidates)
    report.candidates = len(unique)
    report.flagged = sum(1 for c in unique if c.flags)
    if report.flagged:
        logger.warning("Candidates with partial counts", extra={"stratum": spec.stratum_id, "flagged": report.flagged})
    logger.info(
        "Stratum enumerated",
        extra={"stratum": spec.stratum_id, "candidates": report.candidates, "representatives": report.representatives},
    )
    return StratumRun(unique, report)


def execute_stratum(spec: StratumSpec | str, settings: OrbitreeSettings | None = None) -> StratumRun:
    """Run whichever pipeline handles the stratum."""
    resolved = stratum_spec(spec) if isinstance(spec, str) else spec
    match resolved.pipeline:
        case PipelineKind.PRECHECK:
            precheck = stratum_precheck(resolved.genus, resolved.stratum_id)
            notes = [f"verdict: {precheck.verdict}", *precheck.notes]
            return StratumRun([], StratumReport(stratum=resolved.stratum_id, notes=notes))
        case PipelineKind.PARADIGM:
            return run_paradigm(resolved, settings)
        case PipelineKind.GENUS6_GENERIC:
            from hother.orbitree.strata.genus6 import genus6_generic_pipeline

            return genus6_generic_pipeline(settings)
        case PipelineKind.GENUS7_GENERIC:
            from hother.orbitree.strata.genus7 import genus7_generic_pipeline

            return genus7_generic_pipeline(settings)


def run_stratum(spec: StratumSpec | str, settings: OrbitreeSettings | None = None) -> list[CandidateScheme]:
    """Candidate schemes of one stratum, deduplicated by their form tuples.

    Raises:
        ResourceError: A budget was exceeded; the checkpoint names the
            representative reached
    """
    return execute_stratum(spec, settings).candidates
