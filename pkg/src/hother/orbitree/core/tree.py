"""Orbit lookup trees.

An orbit lookup tree for a group G acting on a finite set S stores, for
every subset size k up to its depth, one green node per G-orbit of eligible
k-subsets. Every other eligible node is red and carries a transporter
``g_U`` with ``g_U(green) == U``. Lookups (:meth:`OrbitTree.find`) walk the
tree from the root and return the green representative of any input subset
together with an element mapping it onto the input.
"""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Sequence

from hother.orbitree.config import OrbitreeSettings
from hother.orbitree.core.exceptions import DomainError, IntegrityError, VerificationError
from hother.orbitree.core.models import DepthStats, NodeColor, TreeStats, VerificationReport
from hother.orbitree.core.permgroup import (
    Permutation,
    PermGroup,
    brute_force_elements,
    point_stabilizer,
    reduce_generators,
    schreier_sims,
)
from hother.orbitree.core.retract import GroupRetract, LabeledDigraph, group_retract
from hother.orbitree.types import EligibilityOracle, Label, allow_all
from hother.orbitree.utils.concurrency import map_in_workers
from hother.orbitree.utils.logging import get_logger
from hother.orbitree.utils.resources import MemoryGuard

logger = get_logger(__name__)

MAX_STORED_GENERATORS = 2
"""Stabilizers with more generators are reduced before their Cayley graph is built."""

EdgeLabel = tuple[int, int]
"""``(target node index, rewritten position)``; the permutation is recomputed on demand."""


class OrbitNode:
    """One node of an orbit lookup tree.

    Attributes:
        label: Ordered tuple ``(x1, ..., xk)``
        index: Position within its depth
        parent: Index of the green parent at depth ``k - 1``
        color: Green, red, or uncolored (ineligible)
        eligible: Oracle verdict on the label
        transporter: ``g_U`` for eligible nodes (identity when green)
        green_index: Index of the green node of a red node's orbit
        stabilizer: ``G_U`` (green nodes only)
        cayley: Retract of the Cayley graph of ``G_U`` on ``S \\ U`` (green nodes with children)
        children: Orbit representative ``y`` mapped to the index of child ``U + (y,)``
    """

    __slots__ = (
        "cayley",
        "children",
        "color",
        "eligible",
        "green_index",
        "index",
        "label",
        "parent",
        "stabilizer",
        "transporter",
    )

    def __init__(self, label: Label, index: int, parent: int | None):
        self.label = label
        self.index = index
        self.parent = parent
        self.color = NodeColor.UNCOLORED
        self.eligible = True
        self.transporter: Permutation | None = None
        self.green_index: int | None = None
        self.stabilizer: PermGroup | None = None
        self.cayley: GroupRetract[int] | None = None
        self.children: dict[int, int] = {}

    @property
    def depth(self) -> int:
        return len(self.label)

    @property
    def points(self) -> frozenset[int]:
        return frozenset(self.label)

    @property
    def is_green(self) -> bool:
        return self.color is NodeColor.GREEN

    def h(self, point: int) -> Permutation:
        """``h_U(point)``: element of ``G_U`` mapping the orbit representative of ``point`` to it."""
        if self.cayley is None:
            raise IntegrityError("Node has no child map", witness=self.label)
        return self.cayley.h(point)

    def representative(self, point: int) -> int:
        if self.cayley is None:
            raise IntegrityError("Node has no child map", witness=self.label)
        return self.cayley.representative_of[point]

    def __repr__(self) -> str:
        return f"OrbitNode(label={self.label}, color={self.color.value})"


class OrbitTree:
    """Orbit lookup tree of a permutation group acting on ``{0, ..., domain_size-1}``."""

    def __init__(
        self,
        group: PermGroup,
        domain_size: int,
        oracle: EligibilityOracle | None = None,
        settings: OrbitreeSettings | None = None,
    ):
        if group.degree != domain_size:
            raise DomainError("Group degree differs from the domain size", {"degree": group.degree, "domain": domain_size})
        self.group = group
        self.domain_size = domain_size
        self.oracle: EligibilityOracle = oracle if oracle is not None else allow_all
        self.forbids_nothing = oracle is None
        self.settings = settings or OrbitreeSettings()
        root = OrbitNode((), 0, None)
        root.color = NodeColor.GREEN
        root.transporter = Permutation.identity(domain_size)
        root.stabilizer = group
        self.levels: list[list[OrbitNode]] = [[root]]
        self._green: list[dict[frozenset[int], int]] = [{frozenset(): 0}]
        self._identity = root.transporter

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def root(self) -> OrbitNode:
        return self.levels[0][0]

    def node(self, depth: int, index: int) -> OrbitNode:
        return self.levels[depth][index]

    def greens(self, depth: int) -> list[OrbitNode]:
        return [self.levels[depth][i] for i in self._green[depth].values()]

    def green_for(self, points: frozenset[int]) -> OrbitNode | None:
        """Green node whose point set is exactly ``points``, if any."""
        index = self._green[len(points)].get(points) if len(points) <= self.depth else None
        return None if index is None else self.levels[len(points)][index]

    def group_order(self) -> int:
        return self.group.order()

    # -- lookup ---------------------------------------------------------------

    def _check_sequence(self, sequence: Sequence[int]) -> Label:
        label = tuple(int(x) for x in sequence)
        if len(set(label)) != len(label):
            raise DomainError("Sequence has repeated points", {"sequence": list(label)})
        if any(not 0 <= x < self.domain_size for x in label):
            raise DomainError("Point out of range", {"sequence": list(label), "domain": self.domain_size})
        if len(label) > self.depth:
            raise DomainError("Sequence longer than the tree depth", {"length": len(label), "depth": self.depth})
        return label

    def find(self, sequence: Sequence[int]) -> tuple[OrbitNode, Permutation] | None:
        """Green node ``U`` and ``g`` with ``g(U) == set(sequence)``, or ``None`` when ineligible.

        Raises:
            DomainError: Repeated or out-of-range points, or a sequence longer than the depth
        """
        return self._find(self._check_sequence(sequence))

    def _find(self, label: Label) -> tuple[OrbitNode, Permutation] | None:
        size = len(label)
        if size == 0:
            return self.root, self._identity
        index = self._green[size].get(frozenset(label))
        if index is not None:
            return self.levels[size][index], self._identity
        step = self._descend(label)
        if step is None:
            return None
        node, element = step
        if node.is_green:
            return node, element
        if node.transporter is None or node.green_index is None:
            return None
        return self.levels[size][node.green_index], element * node.transporter

    def _descend(self, label: Label) -> tuple[OrbitNode, Permutation] | None:
        """Modified find: the child node reached for ``label`` without resolving it to a green node."""
        found = self._find(label[:-1])
        if found is None:
            return None
        parent, element = found
        point = element.inverse()(label[-1])
        representative = parent.representative(point)
        child = self.levels[len(label)][parent.children[representative]]
        return child, element * parent.h(point)

    # -- statistics -------------------------------------------------------------

    def stats(self) -> TreeStats:
        """Green, red and forbidden counts per depth."""
        order = self.group.order()
        depths = []
        for depth, level in enumerate(self.levels):
            green = red = forbidden = orbit_sum = 0
            for node in level:
                if node.color is NodeColor.GREEN:
                    green += 1
                    assert node.stabilizer is not None
                    orbit_sum += order // node.stabilizer.order()
                elif node.color is NodeColor.RED:
                    red += 1
                else:
                    forbidden += 1
            depths.append(DepthStats(depth=depth, green=green, red=red, forbidden=forbidden, orbit_sum=orbit_sum))
        return TreeStats(domain_size=self.domain_size, group_order=order, depths=depths)

    def __repr__(self) -> str:
        return f"OrbitTree(domain_size={self.domain_size}, depth={self.depth})"


def new_tree(
    group: PermGroup,
    domain_size: int,
    oracle: EligibilityOracle | None = None,
    settings: OrbitreeSettings | None = None,
) -> OrbitTree:
    """Depth-0 tree: the green root ``∅`` with ``G_∅ = G``."""
    tree = OrbitTree(group, domain_size, oracle, settings)
    logger.info("Orbit tree created", extra={"domain_size": domain_size, "group_generators": len(group.generators)})
    return tree


# -- extension ----------------------------------------------------------------


def attach_children(tree: OrbitTree, node: OrbitNode) -> list[OrbitNode]:
    """Cayley-graph retract of ``G_U`` on ``S \\ U`` and the uncolored children it yields."""
    assert node.stabilizer is not None
    stabilizer = node.stabilizer
    if len(stabilizer.generators) > MAX_STORED_GENERATORS:
        stabilizer = reduce_generators(stabilizer)
        node.stabilizer = stabilizer
    if tree.settings.strict:
        _check_generation(tree, node)
    node.cayley = cayley_retract(tree, node)
    return [OrbitNode((*node.label, rep), -1, node.index) for rep in node.cayley.representatives]


def cayley_retract(tree: OrbitTree, node: OrbitNode) -> GroupRetract[int]:
    """Retract of the Cayley graph of the stored generators of ``G_U``, with dummy edges into ``U``."""
    assert node.stabilizer is not None
    generators = node.stabilizer.generators
    graph: LabeledDigraph[int] = LabeledDigraph(tree.domain_size)
    inside = node.points
    for point in node.label:
        graph.add_dummy_edge(point)
    for position, generator in enumerate(generators):
        images = generator.images
        for point in range(tree.domain_size):
            image = int(images[point])
            if image != point and point not in inside:
                graph.add_edge(point, image, position)
    validate = (lambda g, s, t: g(s) == t) if tree.settings.strict else None
    return group_retract(graph, generators.__getitem__, tree.domain_size, validate=validate)


def _check_generation(tree: OrbitTree, node: OrbitNode) -> None:
    assert node.stabilizer is not None
    expected = node.stabilizer.order()
    fresh = PermGroup(node.stabilizer.generators, tree.domain_size, seed=tree.settings.seed)
    actual = schreier_sims(fresh, exit_rounds=tree.settings.exit_rounds).order()
    if actual != expected:
        raise IntegrityError(
            "Stabilizer generators do not generate the recorded group",
            witness=node.label,
            context={"expected": expected, "actual": actual},
        )
    for generator in node.stabilizer.generators:
        if generator.apply_to_set(node.label) != node.points:
            raise IntegrityError("Stabilizer generator moves its node", witness=node.label)


def _rewrites(label: Label) -> list[Label]:
    """The sequences ``x1..x_{j-1}, x_{n+1}, x_{j+1}..x_n, x_j`` for ``j = 1..n``."""
    size = len(label) - 1
    last = label[size]
    return [(*label[:j], last, *label[j + 1 : size], label[j]) for j in range(size)]


def _node_edges(tree: OrbitTree, index: int) -> tuple[bool, list[tuple[int, int, int]], bool]:
    """Oracle verdict, rewrite edges ``(source, target, j)`` and an inconsistency flag for one new node."""
    node = tree.levels[-1][index]
    if not tree.oracle(node.label):
        return False, [], False
    edges: list[tuple[int, int, int]] = []
    for position, sequence in enumerate(_rewrites(node.label)):
        found = tree._descend(sequence)  # noqa: SLF001
        if found is None:
            return True, edges, True
        edges.append((found[0].index, index, position))
    return True, edges, False


def _edge_element(tree: OrbitTree, label: EdgeLabel) -> Permutation:
    target, position = label
    sequence = _rewrites(tree.levels[-1][target].label)[position]
    found = tree._descend(sequence)  # noqa: SLF001
    if found is None:
        raise IntegrityError("Edge became ineligible on recomputation", witness=sequence)
    return found[1]


def _restricted_orbit(generators: Sequence[Permutation], point: int) -> set[int]:
    seen = {point}
    frontier = [point]
    while frontier:
        current = frontier.pop()
        for generator in generators:
            image = generator(current)
            if image not in seen:
                seen.add(image)
                frontier.append(image)
    return seen


def _assemble_stabilizer(
    tree: OrbitTree,
    node: OrbitNode,
    parent: OrbitNode,
    transporters: dict[int, Permutation],
    edges: Sequence[tuple[int, int, EdgeLabel]],
) -> PermGroup:
    """``G_U`` from the point stabilizer of the new point and the conjugated edge labels."""
    assert parent.stabilizer is not None
    new_point = node.label[-1]
    base = point_stabilizer(parent.stabilizer, new_point)
    conjugates: list[Permutation] = []
    for source, target, label in edges:
        element = _edge_element(tree, label)
        conjugate = transporters[target].inverse() * element * transporters[source]
        if not conjugate.is_identity:
            conjugates.append(conjugate)
    full_orbit = _restricted_orbit([*base.generators, *conjugates], new_point)
    kept: list[Permutation] = []
    current = {new_point}
    for conjugate in conjugates:
        if current == full_orbit:
            break
        candidate = _restricted_orbit([*base.generators, *kept, conjugate], new_point)
        if len(candidate) > len(current):
            kept.append(conjugate)
            current = candidate
    order = base.order() * len(full_orbit)
    return PermGroup([*base.generators, *kept], tree.domain_size, order=order, seed=tree.settings.seed)


def extend(tree: OrbitTree) -> OrbitTree:
    """Grow ``tree`` by one level.

    Builds children of every green node from the Cayley-graph retract of its
    stabilizer, links every eligible child to the children reached by its
    position rewrites, retracts that graph to pick green representatives and
    transporters, and assembles the stabilizers of the new green nodes.

    Raises:
        IntegrityError: In strict mode, when the oracle contradicts itself
        ResourceError: When the memory threshold is crossed
    """
    settings = tree.settings
    depth = tree.depth
    guard = MemoryGuard(settings.budgets.memory_percent, stage="tree-extension")
    previous = tree.levels[depth]

    new_level: list[OrbitNode] = []
    for index in tree._green[depth].values():  # noqa: SLF001
        parent = previous[index]
        for child in attach_children(tree, parent):
            child.index = len(new_level)
            parent.children[child.label[-1]] = child.index
            new_level.append(child)
        guard.check(depth=depth + 1, nodes=len(new_level))
    tree.levels.append(new_level)
    logger.info("Children attached", extra={"depth": depth + 1, "nodes": len(new_level)})

    results = map_in_workers(lambda i: _node_edges(tree, i), range(len(new_level)), settings.workers)
    graph: LabeledDigraph[EdgeLabel] = LabeledDigraph(len(new_level))
    inconsistent: list[Label] = []
    for index, (eligible, edges, broken) in enumerate(results):
        node = new_level[index]
        node.eligible = eligible
        if not eligible or broken:
            graph.add_dummy_edge(index)
        if broken:
            inconsistent.append(node.label)
        for source, target, position in edges:
            graph.add_edge(source, target, (target, position))

    def maps_source_to_target(g: Permutation, source: int, target: int) -> bool:
        return g.apply_to_set(new_level[source].label) == new_level[target].points

    retract = group_retract(
        graph,
        lambda label: _edge_element(tree, label),
        tree.domain_size,
        choose=lambda v: tuple(sorted(new_level[v].label)),
        validate=maps_source_to_target if settings.strict else None,
    )
    transporters = retract.all_h()
    greens: dict[frozenset[int], int] = {}
    for index, node in enumerate(new_level):
        if not retract.eligible[index]:
            if node.eligible and node.label not in inconsistent:
                inconsistent.append(node.label)
            continue
        representative = retract.representative_of[index]
        node.transporter = transporters[index]
        if representative == index:
            node.color = NodeColor.GREEN
            greens[node.points] = index
        else:
            node.color = NodeColor.RED
            node.green_index = representative

    if inconsistent:
        logger.warning(
            "Oracle verdicts are not invariant under the group",
            extra={"depth": depth + 1, "count": len(inconsistent), "example": list(inconsistent[0])},
        )
        if settings.strict:
            raise IntegrityError("Oracle inconsistency detected", witness=inconsistent[0])

    edges_by_rep: dict[int, list[tuple[int, int, EdgeLabel]]] = {rep: [] for rep in retract.representatives}
    for source, target, label in graph.edges:
        if source >= 0 and label is not None and retract.eligible[target]:
            edges_by_rep[retract.representative_of[target]].append((source, target, label))
    tree._green.append(greens)  # noqa: SLF001
    for representative in retract.representatives:
        node = new_level[representative]
        assert node.parent is not None
        node.stabilizer = _assemble_stabilizer(
            tree, node, previous[node.parent], transporters, edges_by_rep[representative]
        )
        if settings.strict:
            _check_generation(tree, node)
        guard.check(depth=depth + 1, green=len(greens))

    logger.info(
        "Tree extended",
        extra={"depth": depth + 1, "nodes": len(new_level), "green": len(greens)},
    )
    return tree


def build_tree(
    group: PermGroup,
    domain_size: int,
    depth: int,
    oracle: EligibilityOracle | None = None,
    settings: OrbitreeSettings | None = None,
) -> OrbitTree:
    """New tree extended ``depth`` times."""
    tree = new_tree(group, domain_size, oracle, settings)
    for _ in range(depth):
        extend(tree)
    return tree


# -- queries ------------------------------------------------------------------


def find(tree: OrbitTree, sequence: Sequence[int]) -> tuple[OrbitNode, Permutation] | None:
    """Module-level alias of :meth:`OrbitTree.find`."""
    return tree.find(sequence)


def green_nodes(tree: OrbitTree, depth: int) -> list[tuple[Label, int]]:
    """Green labels at ``depth`` with their stabilizer orders."""
    if not 0 <= depth <= tree.depth:
        raise DomainError("Depth out of range", {"depth": depth, "tree_depth": tree.depth})
    result = []
    for node in tree.greens(depth):
        assert node.stabilizer is not None
        result.append((node.label, node.stabilizer.order()))
    return result


def _forbidden_witness(tree: OrbitTree, sequence: Label) -> Label | None:
    for size in range(1, len(sequence) + 1):
        if not tree.oracle(sequence[:size]):
            return sequence[:size]
    return None


def verify(tree: OrbitTree, depth: int, trials: int, seed: int | None = None) -> VerificationReport:
    """Spot-check lookups at ``depth`` and, when nothing is forbidden, the orbit-size identity.

    Raises:
        VerificationError: A lookup produced a wrong transporter, an ineligible
            result lacked a forbidden witness, or the orbit sizes do not sum to C(|S|, k)
    """
    if not 0 <= depth <= tree.depth:
        raise DomainError("Depth out of range", {"depth": depth, "tree_depth": tree.depth})
    rng = random.Random(tree.settings.seed if seed is None else seed)
    report = VerificationReport(depth=depth, trials=trials)
    for _ in range(trials):
        sequence = tuple(rng.sample(range(tree.domain_size), depth))
        found = tree.find(sequence)
        if found is None:
            if _forbidden_witness(tree, sequence) is None:
                raise VerificationError("Lookup reported an eligible subset as forbidden", witness=list(sequence))
            report.forbidden += 1
            continue
        node, element = found
        if element.apply_to_set(node.label) != frozenset(sequence):
            raise VerificationError("Transporter does not map the green node onto the subset", witness=list(sequence))
        if tree.settings.strict and element not in tree.group:
            raise VerificationError("Transporter is not a group element", witness=list(sequence))
        report.resolved += 1

    if all(n.color is not NodeColor.UNCOLORED for level in tree.levels[1 : depth + 1] for n in level):
        order = tree.group.order()
        report.orbit_sum = sum(order // stab for _, stab in green_nodes(tree, depth))
        report.expected_sum = math.comb(tree.domain_size, depth)
        if report.orbit_sum != report.expected_sum:
            report.passed = False
            raise VerificationError(
                "Orbit sizes do not add up to the number of subsets",
                witness=depth,
                context={"orbit_sum": report.orbit_sum, "expected": report.expected_sum},
            )
    report.log_summary()
    return report


def brute_force_orbits(
    group: PermGroup,
    domain_size: int,
    size: int,
    oracle: EligibilityOracle | None = None,
) -> list[int]:
    """Sorted orbit sizes of eligible ``size``-subsets, by enumerating every group element.

    A subset is eligible when all of its one-smaller subsets are and the
    oracle accepts it in ascending order.
    """
    check = oracle if oracle is not None else allow_all
    elements = brute_force_elements(group)
    eligible: set[frozenset[int]] = {frozenset()}
    for k in range(1, size + 1):
        layer: set[frozenset[int]] = set()
        for combo in itertools.combinations(range(domain_size), k):
            subset = frozenset(combo)
            if all(subset - {x} in eligible for x in combo) and check(combo):
                layer.add(subset)
        eligible = layer
    sizes: list[int] = []
    remaining = set(eligible)
    while remaining:
        subset = remaining.pop()
        orbit = {g.apply_to_set(subset) for g in elements}
        remaining -= orbit
        sizes.append(len(orbit))
    return sorted(sizes)


def orbit_sizes(tree: OrbitTree, depth: int) -> list[int]:
    """Sorted ``[G : G_U]`` over green nodes at ``depth``."""
    order = tree.group.order()
    return sorted(order // stab for _, stab in green_nodes(tree, depth))
