"""Type definitions and protocols for hother.orbitree.

This module provides Protocol classes and type aliases so that oracles and
point actions type-check without suppressions.
"""

from __future__ import annotations

from typing import Protocol, TypeVar

T = TypeVar("T")

Label = tuple[int, ...]
"""Ordered tuple of domain indices naming an orbit-tree node."""


class EligibilityOracle(Protocol):
    """Decides whether an ordered tuple is eligible.

    Called only on tuples whose proper prefixes were already judged eligible.
    The answer must depend on the G-orbit of the underlying set alone, and any
    superset of a forbidden set must be forbidden.
    """

    def __call__(self, points: Label, /) -> bool:
        """Return ``True`` when ``points`` is eligible.

        Args:
            points: Ordered tuple of distinct domain indices
        """
        ...


def allow_all(points: Label, /) -> bool:
    """Oracle forbidding nothing."""
    return True
