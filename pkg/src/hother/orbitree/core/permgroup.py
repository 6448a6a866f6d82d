"""Permutation groups on dense index domains.

Permutations are numpy image arrays. Groups carry a lazily computed
stabilizer chain (base, strong generators, explicit transversals) obtained by
randomized Schreier-Sims followed by a deterministic completion pass.

Convention: ``g * h`` applies ``h`` first, so ``(g * h)(x) == g(h(x))``.
"""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from hother.orbitree.core.exceptions import DomainError
from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)

_SHORT_REPR_DEGREE = 16

ImageArray = npt.NDArray[np.int16] | npt.NDArray[np.int32]


def _dtype_for(degree: int) -> type[np.int16] | type[np.int32]:
    return np.int16 if degree <= np.iinfo(np.int16).max else np.int32


class Permutation:
    """A bijection of ``{0, ..., n-1}`` stored as its image array."""

    __slots__ = ("_hash", "_images", "_is_identity")

    def __init__(self, images: Sequence[int] | npt.NDArray[np.integer], *, check: bool = True):
        array = np.asarray(images)
        degree = int(array.shape[0])
        array = array.astype(_dtype_for(degree), copy=False)
        if check:
            if array.ndim != 1:
                raise DomainError("Permutation images must be one-dimensional")
            seen = np.zeros(degree, dtype=bool)
            if degree and (array.min() < 0 or array.max() >= degree):
                raise DomainError("Permutation image out of range", {"degree": degree})
            seen[array] = True
            if not seen.all():
                raise DomainError("Images do not form a bijection", {"degree": degree})
        array.setflags(write=False)
        self._images: ImageArray = array
        self._hash: int | None = None
        self._is_identity: bool | None = None

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        """Identity permutation on ``degree`` points."""
        perm = cls(np.arange(degree, dtype=_dtype_for(degree)), check=False)
        perm._is_identity = True
        return perm

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> Permutation:
        """Build a permutation from disjoint cycles, e.g. ``from_cycles(3, (0, 1, 2))``.

        Raises:
            DomainError: A cycle point lies outside ``0..degree-1``
        """
        images = list(range(degree))
        for cycle in cycles:
            for position, point in enumerate(cycle):
                if not 0 <= point < degree:
                    raise DomainError("Cycle point out of range", {"degree": degree, "point": point})
                images[point] = cycle[(position + 1) % len(cycle)]
        return cls(images)

    @property
    def images(self) -> ImageArray:
        """Read-only image array."""
        return self._images

    @property
    def degree(self) -> int:
        return int(self._images.shape[0])

    @property
    def is_identity(self) -> bool:
        if self._is_identity is None:
            self._is_identity = bool(np.array_equal(self._images, np.arange(self.degree)))
        return self._is_identity

    def __call__(self, point: int) -> int:
        return int(self._images[point])

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise DomainError("Cannot compose permutations of different degrees")
        return Permutation(self._images[other._images], check=False)

    def inverse(self) -> Permutation:
        inverse = np.empty_like(self._images)
        inverse[self._images] = np.arange(self.degree, dtype=self._images.dtype)
        return Permutation(inverse, check=False)

    def apply_to_set(self, points: Iterable[int]) -> frozenset[int]:
        """Image of a set of points."""
        return frozenset(int(self._images[p]) for p in points)

    def restricted_images(self, points: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(self._images[p]) for p in points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return bool(np.array_equal(self._images, other._images))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._images.tobytes())
        return self._hash

    def __repr__(self) -> str:
        if self.degree <= _SHORT_REPR_DEGREE:
            return f"Permutation({self._images.tolist()})"
        return f"Permutation(degree={self.degree})"

    def to_text(self) -> str:
        """Whitespace-separated image list."""
        return " ".join(map(str, self._images.tolist()))

    @classmethod
    def from_text(cls, text: str) -> Permutation:
        return cls([int(token) for token in text.split()])


@dataclass(slots=True)
class ChainLevel:
    """One level of a stabilizer chain."""

    base_point: int
    generators: list[Permutation]
    transversal: dict[int, Permutation] = field(default_factory=dict[int, Permutation])

    def rebuild(self, degree: int) -> None:
        self.transversal = orbit_transversal(self.generators, self.base_point, degree)


@dataclass(slots=True)
class StabilizerChain:
    """Base and strong generating set with per-level transversals."""

    degree: int
    levels: list[ChainLevel]

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(level.base_point for level in self.levels)

    @property
    def strong_generators(self) -> list[Permutation]:
        seen: dict[Permutation, None] = {}
        for level in self.levels:
            for generator in level.generators:
                seen.setdefault(generator, None)
        return list(seen)

    def order(self) -> int:
        result = 1
        for level in self.levels:
            result *= len(level.transversal)
        return result

    def sift(self, element: Permutation, start: int = 0) -> tuple[Permutation, int]:
        """Strip ``element`` through the levels; returns the residue and the level it stopped at."""
        residue = element
        for index in range(start, len(self.levels)):
            level = self.levels[index]
            image = residue(level.base_point)
            coset = level.transversal.get(image)
            if coset is None:
                return residue, index
            residue = coset.inverse() * residue
        return residue, len(self.levels)


def orbit_transversal(generators: Sequence[Permutation], point: int, degree: int) -> dict[int, Permutation]:
    """Breadth-first orbit of ``point`` with coset representatives ``u`` satisfying ``u(point) == y``."""
    transversal = {point: Permutation.identity(degree)}
    queue = deque([point])
    while queue:
        current = queue.popleft()
        representative = transversal[current]
        for generator in generators:
            image = generator(current)
            if image not in transversal:
                transversal[image] = generator * representative
                queue.append(image)
    return transversal


class ProductReplacement:
    """Product-replacement random elements with a fixed-size table."""

    def __init__(self, generators: Sequence[Permutation], degree: int, *, seed: int = 0, slots: int = 10, burn_in: int = 50):
        self._rng = random.Random(seed)
        self._degree = degree
        base = [g for g in generators if not g.is_identity]
        if not base:
            self._table: list[Permutation] = []
            self._accumulator = Permutation.identity(degree)
            return
        table = [base[i % len(base)] for i in range(max(slots, len(base)))]
        self._table = table
        self._accumulator = Permutation.identity(degree)
        for _ in range(burn_in):
            self.next()

    def next(self) -> Permutation:
        if not self._table:
            return Permutation.identity(self._degree)
        size = len(self._table)
        s = self._rng.randrange(size)
        t = self._rng.randrange(size - 1)
        if t >= s:
            t += 1
        other = self._table[t] if self._rng.random() < 0.5 else self._table[t].inverse()
        if self._rng.random() < 0.5:
            self._table[s] = self._table[s] * other
        else:
            self._table[s] = other * self._table[s]
        self._accumulator = self._accumulator * self._table[s]
        return self._accumulator


class PermGroup:
    """A permutation group given by generators on ``degree`` points.

    After :func:`schreier_sims` has filled the chain the group is treated as
    immutable and may be shared between threads.
    """

    __slots__ = ("_chain", "_degree", "_generators", "_order", "_random", "_seed")

    def __init__(
        self,
        generators: Iterable[Permutation],
        degree: int,
        *,
        order: int | None = None,
        seed: int = 0,
    ):
        gens = list(generators)
        for generator in gens:
            if generator.degree != degree:
                raise DomainError("All generators must act on the same domain", {"degree": degree})
        self._generators = gens
        self._degree = degree
        self._order = order
        self._chain: StabilizerChain | None = None
        self._random: ProductReplacement | None = None
        self._seed = seed

    @property
    def generators(self) -> list[Permutation]:
        return list(self._generators)

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            schreier_sims(self, known_order=self._order)
        assert self._chain is not None
        return self._chain

    @property
    def has_chain(self) -> bool:
        return self._chain is not None

    def order(self) -> int:
        """Exact group order."""
        return self.chain.order()

    @property
    def known_order(self) -> int | None:
        return self._order

    @property
    def base(self) -> tuple[int, ...]:
        return self.chain.base

    @property
    def strong_generators(self) -> list[Permutation]:
        return self.chain.strong_generators

    def is_trivial(self) -> bool:
        return all(g.is_identity for g in self._generators)

    def __contains__(self, element: Permutation) -> bool:
        return is_member(self, element)

    def __repr__(self) -> str:
        order = self._chain.order() if self._chain is not None else self._order
        return f"PermGroup(degree={self._degree}, generators={len(self._generators)}, order={order})"


def _initial_levels(group: PermGroup, base_prefix: Sequence[int]) -> list[ChainLevel]:
    base = list(dict.fromkeys(base_prefix))
    for generator in group.generators:
        if generator.is_identity:
            continue
        if all(generator(b) == b for b in base):
            moved = int(np.flatnonzero(generator.images != np.arange(group.degree))[0])
            base.append(moved)
    levels: list[ChainLevel] = []
    for index, point in enumerate(base):
        fixing = [g for g in group.generators if not g.is_identity and all(g(b) == b for b in base[:index])]
        level = ChainLevel(point, fixing)
        level.rebuild(group.degree)
        levels.append(level)
    return levels


def _insert_residue(chain: StabilizerChain, residue: Permutation, first: int, last: int) -> None:
    """Add a sifted residue as a strong generator on levels ``first..last``."""
    if last == len(chain.levels):
        moved = int(np.flatnonzero(residue.images != np.arange(chain.degree))[0])
        chain.levels.append(ChainLevel(moved, []))
    for index in range(first, last + 1):
        level = chain.levels[index]
        level.generators.append(residue)
        level.rebuild(chain.degree)


def _complete(chain: StabilizerChain) -> None:
    """Deterministic Schreier-Sims: sift every Schreier generator, bottom level first."""
    index = len(chain.levels) - 1
    while index >= 0:
        level = chain.levels[index]
        restart = False
        for point, coset in list(level.transversal.items()):
            for generator in list(level.generators):
                image = generator(point)
                schreier = level.transversal[image].inverse() * generator * coset
                if schreier.is_identity:
                    continue
                residue, stop = chain.sift(schreier, index + 1)
                if residue.is_identity:
                    continue
                _insert_residue(chain, residue, index + 1, stop)
                index = stop
                restart = True
                break
            if restart:
                break
        if not restart:
            index -= 1


def schreier_sims(
    group: PermGroup,
    base_prefix: Sequence[int] = (),
    known_order: int | None = None,
    *,
    exit_rounds: int = 30,
    seed: int | None = None,
    complete: bool = True,
) -> PermGroup:
    """Fill the stabilizer chain of ``group`` and return it.

    A randomized phase sifts product-replacement elements. When ``known_order``
    is reached the chain is certified complete; otherwise the deterministic
    completion pass runs, so the returned order is always exact.

    Args:
        group: Group to process (updated in place)
        base_prefix: Points that must start the base, e.g. for point stabilizers
        known_order: Target order, when known in advance
        exit_rounds: Consecutive trivial sifts that end the randomized phase
        seed: Seed of the random phase (defaults to the group's seed)
        complete: Run the deterministic pass when the target order is not reached;
            without it the chain may be partial (membership answers stay sound when positive)

    Returns:
        The same group, with its chain filled
    """
    if group.has_chain and not base_prefix:
        return group
    chain = StabilizerChain(group.degree, _initial_levels(group, base_prefix))
    if chain.levels and (known_order is None or chain.order() < known_order):
        sampler = ProductReplacement(group.generators, group.degree, seed=group.seed if seed is None else seed)
        quiet = 0
        while quiet < exit_rounds:
            if known_order is not None and chain.order() >= known_order:
                break
            residue, stop = chain.sift(sampler.next())
            if residue.is_identity:
                quiet += 1
                continue
            quiet = 0
            _insert_residue(chain, residue, 0, stop)
    if complete and (known_order is None or chain.order() != known_order):
        _complete(chain)
    group._chain = chain  # noqa: SLF001
    group._order = chain.order()  # noqa: SLF001
    logger.debug(
        "Stabilizer chain computed",
        extra={"degree": group.degree, "order": group._order, "base_length": len(chain.levels)},  # noqa: SLF001
    )
    return group


def orbit_with_transversal(group: PermGroup, point: int) -> tuple[set[int], dict[int, Permutation]]:
    """Orbit of ``point`` under the generators, with a transversal."""
    if not 0 <= point < group.degree:
        raise DomainError("Point out of range", {"point": point, "degree": group.degree})
    transversal = orbit_transversal(group.generators, point, group.degree)
    return set(transversal), transversal


def orbit(group: PermGroup, point: int) -> set[int]:
    """Orbit of ``point`` without coset representatives."""
    if not 0 <= point < group.degree:
        raise DomainError("Point out of range", {"point": point, "degree": group.degree})
    seen = {point}
    queue = deque([point])
    images = [g.images for g in group.generators]
    while queue:
        current = queue.popleft()
        for image_array in images:
            image = int(image_array[current])
            if image not in seen:
                seen.add(image)
                queue.append(image)
    return seen


def point_stabilizer(group: PermGroup, point: int) -> PermGroup:
    """Stabilizer of ``point``, generated by the chain's level-one strong generators."""
    if not 0 <= point < group.degree:
        raise DomainError("Point out of range", {"point": point, "degree": group.degree})
    orbit_size = len(orbit(group, point))
    total = group.order()
    work = PermGroup(group.generators, group.degree, seed=group.seed)
    schreier_sims(work, base_prefix=(point,), known_order=total)
    levels = work.chain.levels[1:]
    generators = list(dict.fromkeys(g for level in levels for g in level.generators))
    stabilizer = PermGroup(generators, group.degree, order=total // orbit_size, seed=group.seed)
    copied = [ChainLevel(level.base_point, list(level.generators), dict(level.transversal)) for level in levels]
    stabilizer._chain = StabilizerChain(group.degree, copied)  # noqa: SLF001
    return stabilizer


def random_element(group: PermGroup, *, slots: int = 10, burn_in: int = 50) -> Permutation:
    """A random group element; reproducible through the group's seed.

    The replacement table is created on first use with ``slots`` entries and
    ``burn_in`` warm-up steps.
    """
    if group._random is None:  # noqa: SLF001
        sampler = ProductReplacement(group.generators, group.degree, seed=group.seed, slots=slots, burn_in=burn_in)
        group._random = sampler  # noqa: SLF001
    return group._random.next()  # noqa: SLF001


def is_member(group: PermGroup, element: Permutation) -> bool:
    """Membership by sifting through the stabilizer chain."""
    if element.degree != group.degree:
        raise DomainError("Domain size mismatch", {"group": group.degree, "element": element.degree})
    residue, _ = group.chain.sift(element)
    return residue.is_identity


def reduce_generators(group: PermGroup) -> PermGroup:
    """Drop generators that do not enlarge the group generated so far.

    The group order must be known (or computable); reduction stops as soon as the
    kept generators reach it.
    """
    target = group.order()
    kept: list[Permutation] = []
    current: PermGroup | None = None
    for generator in group.generators:
        if generator.is_identity:
            continue
        if current is not None and (current.order() == target or is_member(current, generator)):
            continue
        kept.append(generator)
        current = PermGroup(kept, group.degree, seed=group.seed)
        schreier_sims(current, known_order=target, complete=False)
        if current.order() == target:
            break
    reduced = PermGroup(kept, group.degree, order=target, seed=group.seed)
    if current is not None and current.order() == target:
        reduced._chain = current.chain  # noqa: SLF001
    return reduced


def brute_force_elements(group: PermGroup, limit: int = 100_000) -> list[Permutation]:
    """All group elements by closure; for small groups and tests."""
    identity = Permutation.identity(group.degree)
    elements = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for generator in group.generators:
            product = generator * current
            if product not in elements:
                if len(elements) >= limit:
                    raise DomainError("Group larger than the closure limit", {"limit": limit})
                elements.add(product)
                queue.append(product)
    return list(elements)


def stabilizer_chain(group: PermGroup, base_prefix: Sequence[int] = (), known_order: int | None = None) -> StabilizerChain:
    """Stabilizer chain of ``group`` whose base starts with ``base_prefix``; ``group`` is left untouched."""
    work = PermGroup(group.generators, group.degree, seed=group.seed)
    target = known_order if known_order is not None else (group.order() if group.has_chain else None)
    return schreier_sims(work, base_prefix=base_prefix, known_order=target).chain


def dump_permutation(perm: Permutation) -> str:
    return perm.to_text()


def load_permutation(text: str) -> Permutation:
    return Permutation.from_text(text)


def dump_group(group: PermGroup) -> str:
    """One generator per line; an empty generating set dumps as a ``# degree`` line only."""
    lines = [f"# degree {group.degree}"]
    lines.extend(g.to_text() for g in group.generators)
    return "\n".join(lines) + "\n"


def load_group(text: str, *, seed: int = 0) -> PermGroup:
    degree: int | None = None
    generators: list[Permutation] = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            match stripped[1:].split():
                case ["degree", value]:
                    degree = int(value)
            continue
        generators.append(Permutation.from_text(stripped))
    if degree is None:
        if not generators:
            raise DomainError("Group text has neither generators nor a degree header")
        degree = generators[0].degree
    return PermGroup(generators, degree, seed=seed)
