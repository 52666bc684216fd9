#!/usr/bin/env python3
"""
Test the telemetry service: disabled by default, console export on request,
and never raising into a sweep.

Usage:
    pytest tests/test_telemetry.py -v

    # Exercise console export
    CVQKD_TELEMETRY_CONSOLE=1 pytest tests/test_telemetry.py -v
"""

import os
import sys
from unittest.mock import MagicMock, patch

import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cvqkd.core.errors import DomainError
from cvqkd.telemetry import TelemetryService, get_telemetry_service, reset_telemetry_service

QUIET = {"APPLICATIONINSIGHTS_CONNECTION_STRING": "", "CVQKD_TELEMETRY_CONSOLE": ""}


@pytest.fixture(autouse=True)
def fresh_service():
    reset_telemetry_service()
    yield
    reset_telemetry_service()


class TestDisabled:
    """Test behavior without any exporter configured."""

    def test_disabled_without_configuration(self):
        with patch.dict(os.environ, QUIET):
            service = TelemetryService()
        assert not service.enabled
        assert service.tracer is None

    def test_calls_are_no_ops(self):
        """Test that every tracking call is safe when disabled."""
        with patch.dict(os.environ, QUIET):
            service = TelemetryService()
        assert service.track_request("bler_sweep", {"system": "D"}) is None
        service.track_event("skr_sweep", {"beta": 0.9})
        service.track_exception(DomainError("T must be positive"))
        service.track_sweep_point({"snr_db": 1.0, "bler": 0.1})
        service.track_workflow_step("bler", 12.5)


class TestSingleton:
    """Test the global service accessor."""

    def test_reused_until_reset(self):
        with patch.dict(os.environ, QUIET):
            first = get_telemetry_service()
            assert get_telemetry_service() is first
            reset_telemetry_service()
            assert get_telemetry_service() is not first


class TestEnabled:
    """Test span creation with a console exporter."""

    def test_console_exporter(self):
        pytest.importorskip("opentelemetry.sdk")
        with patch.dict(os.environ, {**QUIET, "CVQKD_TELEMETRY_CONSOLE": "1"}):
            service = TelemetryService()
        assert service.enabled
        span = service.track_request("bler_sweep", {"points": 3})
        assert span is not None
        span.end()

    def test_tracer_failures_are_swallowed(self):
        with patch.dict(os.environ, QUIET):
            service = TelemetryService()
        service.enabled = True
        service.tracer = MagicMock()
        service.tracer.start_span.side_effect = RuntimeError("exporter down")
        service.tracer.start_as_current_span.side_effect = RuntimeError("exporter down")
        assert service.track_request("bler_sweep") is None
        service.track_event("skr_sweep")
        service.track_sweep_point({"snr_db": 1.0})
        service.track_exception(ValueError("boom"))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
