"""Orbitree - orbit lookup trees for finite group actions on subsets

Orbit representatives of k-element subsets under a permutation group, with
transporters and stabilizers, plus the GF(2) geometry and the Brill-Noether
strata harness built on top of them.
"""

import importlib.metadata

from .config import Budgets, OgOracleSettings, OrbitreeSettings
from .core.exceptions import (
    ComponentError,
    DomainError,
    ErrorKind,
    IntegrityError,
    OrbitreeError,
    PipelineError,
    PurityError,
    ResourceError,
    UnsupportedError,
    UsageError,
    VerificationError,
)
from .core.models import NodeColor, TreeStats, VerificationReport
from .core.permgroup import Permutation, PermGroup, schreier_sims
from .core.retract import group_retract
from .core.tree import OrbitNode, OrbitTree, brute_force_orbits, build_tree, extend, find, green_nodes, verify
from .types import EligibilityOracle, Label, allow_all

try:
    __version__ = importlib.metadata.version("hother-orbitree")
except importlib.metadata.PackageNotFoundError:
    __version__ = "0.0.0+dev"

__all__ = [
    # Settings
    "Budgets",
    "OgOracleSettings",
    "OrbitreeSettings",
    # Groups
    "Permutation",
    "PermGroup",
    "schreier_sims",
    "group_retract",
    # Trees
    "OrbitNode",
    "OrbitTree",
    "build_tree",
    "extend",
    "find",
    "green_nodes",
    "verify",
    "brute_force_orbits",
    # Models
    "NodeColor",
    "TreeStats",
    "VerificationReport",
    # Exceptions
    "ErrorKind",
    "OrbitreeError",
    "DomainError",
    "IntegrityError",
    "ResourceError",
    "ComponentError",
    "PurityError",
    "UnsupportedError",
    "VerificationError",
    "PipelineError",
    "UsageError",
    # Types
    "EligibilityOracle",
    "Label",
    "allow_all",
]
