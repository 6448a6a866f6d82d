"""
Unit tests for the psutil-backed memory guard and worker defaults.
"""

from types import SimpleNamespace

import psutil
import pytest

from hother.orbitree.core.exceptions import ResourceError
from hother.orbitree.utils.resources import MemoryGuard, default_workers


class TestMemoryGuard:
    """Test memory threshold checks."""

    def test_below_threshold(self, mocker):
        """Test that a quiet system passes."""
        mocker.patch("psutil.virtual_memory", return_value=SimpleNamespace(percent=40.0))
        MemoryGuard(90.0, "scan").check(representative=3)

    def test_above_threshold(self, mocker):
        """Test the error raised over the threshold."""
        mocker.patch("psutil.virtual_memory", return_value=SimpleNamespace(percent=97.5))
        guard = MemoryGuard(90.0, "scan", checkpoint="g7-tetragonal:x11:12")
        with pytest.raises(ResourceError) as raised:
            guard.check(representative=12)
        error = raised.value
        assert error.budget == "memory_percent"
        assert error.checkpoint == "g7-tetragonal:x11:12"
        assert error.context["current"] == 97.5
        assert error.context["representative"] == 12

    def test_threshold_is_inclusive(self, mocker):
        """Test that usage equal to the threshold passes."""
        mocker.patch("psutil.virtual_memory", return_value=SimpleNamespace(percent=90.0))
        MemoryGuard(90.0, "scan").check()


class TestDefaultWorkers:
    """Test the worker count default."""

    def test_affinity(self, mocker):
        """Test the CPU affinity count."""
        process = mocker.Mock()
        process.cpu_affinity.return_value = [0, 1, 2]
        mocker.patch("psutil.Process", return_value=process)
        assert default_workers() == 3

    def test_fallback_to_cpu_count(self, mocker):
        """Test platforms without affinity support."""
        process = mocker.Mock()
        process.cpu_affinity.side_effect = AttributeError
        mocker.patch("psutil.Process", return_value=process)
        mocker.patch("psutil.cpu_count", return_value=None)
        assert default_workers() == 1

    def test_psutil_error(self, mocker):
        """Test that psutil failures fall back to the logical count."""
        process = mocker.Mock()
        process.cpu_affinity.side_effect = psutil.AccessDenied()
        mocker.patch("psutil.Process", return_value=process)
        mocker.patch("psutil.cpu_count", return_value=8)
        assert default_workers() == 8
