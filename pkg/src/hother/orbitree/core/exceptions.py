"""Exception hierarchy for orbitree.

Every error carries an :class:`ErrorKind`, a human-readable message and a
free-form context dictionary so that the command line can turn it into a
machine-readable record.
"""

from enum import Enum
from pathlib import Path
from typing import Any


class ErrorKind(str, Enum):
    """Category of a failure."""

    DOMAIN = "domain"
    INTEGRITY = "integrity"
    RESOURCE = "resource"
    COMPONENT = "component"
    PURITY = "purity"
    UNSUPPORTED = "unsupported"
    VERIFICATION = "verification"
    PIPELINE = "pipeline"
    USAGE = "usage"


class OrbitreeError(Exception):
    """Base exception for orbitree errors.

    Attributes:
        kind: The error category
        message: Human-readable description
        context: Machine-readable details (indices, sizes, witnesses)
    """

    def __init__(
        self,
        kind: ErrorKind,
        message: str | None = None,
        context: dict[str, Any] | None = None,
    ):
        self.kind = kind
        self.message = message or f"orbitree failure: {kind.value}"
        self.context = dict(context or {})
        super().__init__(self.message)

    def to_record(self) -> dict[str, Any]:
        """Render the error as a JSON-able record."""
        return {"error": self.kind.value, "message": self.message, "context": self.context}


class DomainError(OrbitreeError):
    """Input outside the domain of an operation."""

    def __init__(self, message: str | None = None, context: dict[str, Any] | None = None):
        super().__init__(ErrorKind.DOMAIN, message or "Input outside the operation domain", context)


class IntegrityError(OrbitreeError):
    """Internal data contradicts itself (bad retract label, inconsistent oracle)."""

    def __init__(
        self,
        message: str | None = None,
        witness: Any = None,
        context: dict[str, Any] | None = None,
    ):
        self.witness = witness
        merged = dict(context or {})
        if witness is not None:
            merged.setdefault("witness", witness)
        super().__init__(ErrorKind.INTEGRITY, message or "Integrity check failed", merged)


class ResourceError(OrbitreeError):
    """A configured budget was exceeded."""

    def __init__(
        self,
        budget: str,
        limit: float,
        checkpoint: Path | str | None = None,
        message: str | None = None,
        context: dict[str, Any] | None = None,
    ):
        self.budget = budget
        self.limit = limit
        self.checkpoint = str(checkpoint) if checkpoint is not None else None
        merged = {"budget": budget, "limit": limit, "checkpoint": self.checkpoint, **(context or {})}
        super().__init__(ErrorKind.RESOURCE, message or f"Budget '{budget}' exceeded (limit {limit})", merged)


class ComponentError(OrbitreeError):
    """A Lagrangian lies on the component of the orthogonal Grassmannian not containing L0."""

    def __init__(self, parity: int, message: str | None = None, context: dict[str, Any] | None = None):
        self.parity = parity
        default_message = f"Lagrangian meets L0 in even dimension {parity}; wrong component"
        super().__init__(ErrorKind.COMPONENT, message or default_message, {"parity": parity, **(context or {})})


class PurityError(OrbitreeError):
    """A spinor is not pure."""

    def __init__(self, message: str | None = None, context: dict[str, Any] | None = None):
        super().__init__(ErrorKind.PURITY, message or "Spinor is not pure", context)


class UnsupportedError(OrbitreeError):
    """The ambient kind does not provide the requested capability."""

    def __init__(self, kind: str, message: str | None = None, context: dict[str, Any] | None = None):
        self.unsupported_kind = kind
        super().__init__(
            ErrorKind.UNSUPPORTED,
            message or f"Unsupported ambient kind: {kind}",
            {"kind": kind, **(context or {})},
        )


class VerificationError(OrbitreeError):
    """A tree verification assertion failed."""

    def __init__(self, message: str | None = None, witness: Any = None, context: dict[str, Any] | None = None):
        self.witness = witness
        merged = dict(context or {})
        if witness is not None:
            merged.setdefault("witness", witness)
        super().__init__(ErrorKind.VERIFICATION, message or "Verification failed", merged)


class PipelineError(OrbitreeError):
    """A stage of a strata pipeline failed one of its own assertions."""

    def __init__(self, stage: str, message: str | None = None, context: dict[str, Any] | None = None):
        self.stage = stage
        super().__init__(
            ErrorKind.PIPELINE,
            message or f"Pipeline stage '{stage}' failed",
            {"stage": stage, **(context or {})},
        )


class UsageError(OrbitreeError):
    """Invalid command-line configuration."""

    def __init__(self, message: str | None = None, context: dict[str, Any] | None = None):
        super().__init__(ErrorKind.USAGE, message or "Invalid configuration", context)
