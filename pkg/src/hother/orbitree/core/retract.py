"""Group retracts of labeled digraphs with a dummy vertex.

A retract picks one representative per connected component that does not
touch the dummy vertex and a group element ``h(v)`` mapping the
representative to every other vertex ``v`` of that component. Labels are
resolved lazily through a callback so that callers may store edge labels as
generator indices.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Hashable
from dataclasses import dataclass, field
from typing import Generic, TypeVar

from hother.orbitree.core.exceptions import IntegrityError
from hother.orbitree.core.permgroup import Permutation

DUMMY = -1
"""Index of the dummy vertex ``•``."""

_UNVISITED = -2

L = TypeVar("L")


@dataclass(slots=True)
class LabeledDigraph(Generic[L]):
    """Directed multigraph on ``0..vertex_count-1`` plus the dummy vertex.

    Edges are ``(source, target, label)``; edges out of :data:`DUMMY` carry ``None``.
    """

    vertex_count: int
    edges: list[tuple[int, int, L | None]] = field(default_factory=list[tuple[int, int, "L | None"]])

    def add_edge(self, source: int, target: int, label: L | None) -> None:
        self.edges.append((source, target, label))

    def add_dummy_edge(self, target: int) -> None:
        self.edges.append((DUMMY, target, None))


@dataclass(slots=True)
class GroupRetract(Generic[L]):
    """Spanning-forest data of a retract.

    ``parent[v]`` is ``(parent_vertex, edge_label, forward)`` for non-representative
    eligible vertices; ``h(v)`` is rebuilt from it on demand.
    """

    vertex_count: int
    component: list[int]
    eligible: list[bool]
    representative_of: list[int]
    representatives: list[int]
    parent: dict[int, tuple[int, L, bool]]
    loops: list[tuple[int, L]]
    resolve: Callable[[L], Permutation]
    degree: int

    def is_representative(self, vertex: int) -> bool:
        return self.eligible[vertex] and self.representative_of[vertex] == vertex

    def component_members(self) -> dict[int, list[int]]:
        """Eligible vertices grouped by their representative."""
        groups: dict[int, list[int]] = {rep: [] for rep in self.representatives}
        for vertex in range(self.vertex_count):
            if self.eligible[vertex]:
                groups[self.representative_of[vertex]].append(vertex)
        return groups

    def h(self, vertex: int) -> Permutation:
        """Element mapping the component representative to ``vertex``."""
        if not self.eligible[vertex]:
            raise IntegrityError("Vertex lies in an ineligible component", witness=vertex)
        path: list[tuple[L, bool]] = []
        current = vertex
        while current in self.parent:
            previous, label, forward = self.parent[current]
            path.append((label, forward))
            current = previous
        result = Permutation.identity(self.degree)
        for label, forward in reversed(path):
            element = self.resolve(label)
            result = (element if forward else element.inverse()) * result
        return result

    def all_h(self) -> dict[int, Permutation]:
        """``h`` for every eligible vertex, computed top-down along the forest."""
        result: dict[int, Permutation] = {}
        identity = Permutation.identity(self.degree)
        for vertex in self._bfs_order():
            entry = self.parent.get(vertex)
            if entry is None:
                result[vertex] = identity
                continue
            previous, label, forward = entry
            element = self.resolve(label)
            result[vertex] = (element if forward else element.inverse()) * result[previous]
        return result

    def _bfs_order(self) -> list[int]:
        children: dict[int, list[int]] = {}
        for vertex, (previous, _, _) in self.parent.items():
            children.setdefault(previous, []).append(vertex)
        order: list[int] = []
        queue = deque(self.representatives)
        while queue:
            vertex = queue.popleft()
            order.append(vertex)
            queue.extend(children.get(vertex, ()))
        return order


def _components(graph: LabeledDigraph[L]) -> tuple[list[int], list[list[tuple[int, L | None, bool]]]]:
    """Undirected components; the dummy vertex is component ``-1``."""
    count = graph.vertex_count
    adjacency: list[list[tuple[int, L | None, bool]]] = [[] for _ in range(count)]
    dummy_targets: list[int] = []
    for source, target, label in graph.edges:
        if source == DUMMY:
            dummy_targets.append(target)
            continue
        if source == target:
            continue
        adjacency[source].append((target, label, True))
        adjacency[target].append((source, label, False))
    component = [_UNVISITED] * count
    next_id = 0
    for start in range(count):
        if component[start] != _UNVISITED:
            continue
        component[start] = next_id
        queue = deque([start])
        while queue:
            vertex = queue.popleft()
            for neighbour, _, _ in adjacency[vertex]:
                if component[neighbour] == _UNVISITED:
                    component[neighbour] = next_id
                    queue.append(neighbour)
        next_id += 1
    tainted = {component[t] for t in dummy_targets}
    component = [-1 if c in tainted else c for c in component]
    return component, adjacency


def group_retract(
    graph: LabeledDigraph[L],
    resolve: Callable[[L], Permutation],
    degree: int,
    *,
    choose: Callable[[int], Hashable] | None = None,
    validate: Callable[[Permutation, int, int], bool] | None = None,
) -> GroupRetract[L]:
    """Compute a group retract of ``graph`` in time linear in its size.

    Args:
        graph: The labeled digraph
        resolve: Turns an edge label into its permutation
        degree: Degree of the permutations
        choose: Sort key selecting each component's representative (smallest index by default)
        validate: Optional check ``validate(g, v1, v2)`` that ``g`` maps ``v1`` to ``v2``

    Raises:
        IntegrityError: An edge label does not map its source to its target
    """
    if validate is not None:
        for source, target, label in graph.edges:
            if source == DUMMY or label is None:
                continue
            if not validate(resolve(label), source, target):
                raise IntegrityError("Edge label does not map source to target", witness=(source, target))

    component, adjacency = _components(graph)
    key = choose if choose is not None else (lambda v: v)
    best: dict[int, int] = {}
    for vertex, comp in enumerate(component):
        if comp < 0:
            continue
        current = best.get(comp)
        if current is None or key(vertex) < key(current):  # type: ignore[operator]
            best[comp] = vertex

    representative_of = [-1] * graph.vertex_count
    parent: dict[int, tuple[int, L, bool]] = {}
    representatives = sorted(best.values(), key=key)  # type: ignore[arg-type]
    for representative in representatives:
        representative_of[representative] = representative
        queue = deque([representative])
        while queue:
            vertex = queue.popleft()
            for neighbour, label, forward in adjacency[vertex]:
                if representative_of[neighbour] != -1:
                    continue
                representative_of[neighbour] = representative
                parent[neighbour] = (vertex, label, forward)  # type: ignore[assignment]
                queue.append(neighbour)

    loops = [(source, label) for source, target, label in graph.edges if source == target and source != DUMMY and label is not None]
    return GroupRetract(
        vertex_count=graph.vertex_count,
        component=component,
        eligible=[c >= 0 for c in component],
        representative_of=representative_of,
        representatives=representatives,
        parent=parent,
        loops=loops,
        resolve=resolve,
        degree=degree,
    )


def permutation_retract(
    graph: LabeledDigraph[Permutation],
    degree: int,
    *,
    choose: Callable[[int], Hashable] | None = None,
    validate: Callable[[Permutation, int, int], bool] | None = None,
) -> GroupRetract[Permutation]:
    """:func:`group_retract` for graphs labeled directly by permutations."""
    return group_retract(graph, lambda p: p, degree, choose=choose, validate=validate)

