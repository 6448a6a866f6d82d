"""
Unit tests for the exception hierarchy in hother.orbitree.core.exceptions.
"""

import json

import pytest
from inline_snapshot import snapshot

from hother.orbitree.core.exceptions import (
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


class TestOrbitreeError:
    """Test the base error."""

    def test_default_message(self):
        """Test the message derived from the kind."""
        error = OrbitreeError(ErrorKind.DOMAIN)
        assert error.message == "orbitree failure: domain"
        assert str(error) == "orbitree failure: domain"
        assert error.context == {}

    def test_context_is_copied(self):
        """Test that the caller's dictionary is not shared."""
        context = {"space": "p2"}
        error = DomainError("Bad point", context)
        context["space"] = "p3"
        assert error.context == {"space": "p2"}

    def test_to_record_is_json(self):
        """Test the machine-readable record."""
        record = DomainError("Unknown space id", {"space": "p42"}).to_record()
        assert record == snapshot({"error": "domain", "message": "Unknown space id", "context": {"space": "p42"}})
        json.dumps(record)

    @pytest.mark.parametrize(
        ("error", "kind"),
        [
            (DomainError(), ErrorKind.DOMAIN),
            (IntegrityError(), ErrorKind.INTEGRITY),
            (ResourceError("max_points", 10), ErrorKind.RESOURCE),
            (ComponentError(0), ErrorKind.COMPONENT),
            (PurityError(), ErrorKind.PURITY),
            (UnsupportedError("weighted"), ErrorKind.UNSUPPORTED),
            (VerificationError(), ErrorKind.VERIFICATION),
            (PipelineError("refine"), ErrorKind.PIPELINE),
            (UsageError(), ErrorKind.USAGE),
        ],
    )
    def test_kinds(self, error, kind):
        """Test that every subclass carries its kind."""
        assert isinstance(error, OrbitreeError)
        assert error.kind is kind


class TestSpecificErrors:
    """Test the extra attributes of specific errors."""

    def test_integrity_witness(self):
        """Test that the witness is exposed and recorded."""
        error = IntegrityError("Label mismatch", witness=(0, 2))
        assert error.witness == (0, 2)
        assert error.context["witness"] == (0, 2)

    def test_integrity_without_witness(self):
        """Test that no witness key is added when there is none."""
        assert "witness" not in IntegrityError("Broken").context

    def test_resource_checkpoint(self):
        """Test budget, limit and checkpoint."""
        error = ResourceError("max_coset_dimension", 24, checkpoint="g6-plane-quintic:p2:3", context={"dimension": 30})
        assert error.budget == "max_coset_dimension"
        assert error.limit == 24
        assert error.checkpoint == "g6-plane-quintic:p2:3"
        assert error.context == {
            "budget": "max_coset_dimension",
            "limit": 24,
            "checkpoint": "g6-plane-quintic:p2:3",
            "dimension": 30,
        }
        assert error.message == "Budget 'max_coset_dimension' exceeded (limit 24)"

    def test_resource_path_checkpoint(self, tmp_path):
        """Test that path checkpoints are stored as strings."""
        error = ResourceError("memory_percent", 90.0, checkpoint=tmp_path / "tree.txt")
        assert error.checkpoint == str(tmp_path / "tree.txt")

    def test_component_parity(self):
        """Test the meet dimension in the message."""
        error = ComponentError(2)
        assert error.parity == 2
        assert "even dimension 2" in error.message

    def test_unsupported_kind(self):
        """Test the unsupported ambient kind."""
        error = UnsupportedError("weighted", context={"space": "wp1112"})
        assert error.unsupported_kind == "weighted"
        assert error.context == {"kind": "weighted", "space": "wp1112"}

    def test_pipeline_stage(self):
        """Test the failing stage."""
        error = PipelineError("genus6-classes", "Wrong class count")
        assert error.stage == "genus6-classes"
        assert error.context["stage"] == "genus6-classes"
