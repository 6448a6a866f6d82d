"""Line-oriented text format for orbit trees.

The first line is a header::

    # orbitree-tree 1 domain=<n> depth=<d> seed=<s> config=<hash>

followed by one line per node, depth by depth, in node-index order::

    <depth> | <parent> | <label> | <color> | <order> | <transporter> | <ngens> | <gen> ; <gen> ; ...

``parent`` is ``-`` for the root, ``label`` is space-separated (``-`` when
empty), ``order`` is the stabilizer order of green nodes (``-`` otherwise),
``transporter`` is the image list of ``g_U`` (``-`` for ineligible nodes).
Child maps are not stored; they are recomputed from the stabilizer
generators on load.
"""

from __future__ import annotations

from typing import TextIO

from hother.orbitree.config import OrbitreeSettings
from hother.orbitree.core.exceptions import DomainError, IntegrityError
from hother.orbitree.core.models import NodeColor
from hother.orbitree.core.permgroup import Permutation, PermGroup
from hother.orbitree.core.tree import OrbitNode, OrbitTree, cayley_retract
from hother.orbitree.types import EligibilityOracle
from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)

FORMAT_VERSION = 1
_MAGIC = "# orbitree-tree"
_NODE_FIELDS = 8


def _field(value: str) -> str:
    return value if value else "-"


def dump_tree(tree: OrbitTree, stream: TextIO) -> int:
    """Write ``tree`` to ``stream``; returns the number of node lines."""
    settings = tree.settings
    stream.write(
        f"{_MAGIC} {FORMAT_VERSION} domain={tree.domain_size} depth={tree.depth} "
        f"seed={settings.seed} config={settings.config_hash()}\n"
    )
    count = 0
    for depth, level in enumerate(tree.levels):
        for node in level:
            parent = "-" if node.parent is None else str(node.parent)
            label = _field(" ".join(map(str, node.label)))
            transporter = "-" if node.transporter is None else node.transporter.to_text()
            if node.is_green and node.stabilizer is not None:
                order = str(node.stabilizer.order())
                generators = node.stabilizer.generators
                gens = " ; ".join(g.to_text() for g in generators)
                ngens = str(len(generators))
            else:
                order, gens, ngens = "-", "", "0"
            stream.write(
                f"{depth} | {parent} | {label} | {node.color.value} | {order} | {transporter} | {ngens} | {_field(gens)}\n"
            )
            count += 1
    logger.debug("Tree written", extra={"nodes": count, "depth": tree.depth})
    return count


def _parse_header(line: str) -> dict[str, str]:
    if not line.startswith(_MAGIC):
        raise DomainError("Not an orbit tree file")
    tokens = line[len(_MAGIC) :].split()
    if not tokens or int(tokens[0]) != FORMAT_VERSION:
        raise DomainError("Unsupported tree format version", {"header": line.strip()})
    return dict(token.split("=", 1) for token in tokens[1:])


def load_tree(
    stream: TextIO,
    group: PermGroup,
    oracle: EligibilityOracle | None = None,
    settings: OrbitreeSettings | None = None,
) -> OrbitTree:
    """Read a tree written by :func:`dump_tree`.

    ``group`` must be the group the tree was built for. The child maps of
    green nodes are recomputed and checked against the stored children.

    Raises:
        DomainError: Malformed file or mismatched domain
        IntegrityError: Recomputed child maps disagree with the stored nodes
    """
    header = _parse_header(stream.readline())
    domain = int(header["domain"])
    tree = OrbitTree(group, domain, oracle, settings)
    if header.get("config") not in {None, tree.settings.config_hash()}:
        logger.warning("Tree was built with different settings", extra={"stored": header.get("config")})
    levels: list[list[OrbitNode]] = []
    for raw in stream:
        if not raw.strip() or raw.startswith("#"):
            continue
        parts = [part.strip() for part in raw.split("|")]
        if len(parts) != _NODE_FIELDS:
            raise DomainError("Malformed node line", {"line": raw.strip()})
        depth = int(parts[0])
        while len(levels) <= depth:
            levels.append([])
        label = () if parts[2] == "-" else tuple(int(x) for x in parts[2].split())
        parent = None if parts[1] == "-" else int(parts[1])
        node = OrbitNode(label, len(levels[depth]), parent)
        node.color = NodeColor(parts[3])
        node.eligible = node.color is not NodeColor.UNCOLORED
        if parts[5] != "-":
            node.transporter = Permutation.from_text(parts[5])
        if node.color is NodeColor.GREEN:
            generators = [] if parts[7] == "-" else [Permutation.from_text(g) for g in parts[7].split(";")]
            if len(generators) != int(parts[6]):
                raise DomainError("Generator count mismatch", {"label": list(label)})
            node.stabilizer = PermGroup(generators, domain, order=int(parts[4]), seed=tree.settings.seed)
        levels[depth].append(node)

    if not levels or len(levels[0]) != 1:
        raise DomainError("Tree file has no root")
    tree.levels = levels
    tree._green = [  # noqa: SLF001
        {node.points: node.index for node in level if node.is_green} for level in levels
    ]
    for depth, level in enumerate(levels[:-1]):
        for child in levels[depth + 1]:
            assert child.parent is not None
            level[child.parent].children[child.label[-1]] = child.index
        for node in level:
            if not node.is_green:
                continue
            node.cayley = cayley_retract(tree, node)
            if sorted(node.cayley.representatives) != sorted(node.children):
                raise IntegrityError("Stored children disagree with the recomputed child map", witness=node.label)
    for depth, level in enumerate(levels):
        for node in level:
            if node.color is NodeColor.RED:
                node.green_index = _green_index(tree, depth, node)
    logger.info("Tree loaded", extra={"depth": tree.depth, "domain_size": domain})
    return tree


def _green_index(tree: OrbitTree, depth: int, node: OrbitNode) -> int:
    assert node.transporter is not None
    preimage = node.transporter.inverse().apply_to_set(node.label)
    index = tree._green[depth].get(preimage)  # noqa: SLF001
    if index is None:
        raise IntegrityError("Red node transporter does not lead to a green node", witness=node.label)
    return index
