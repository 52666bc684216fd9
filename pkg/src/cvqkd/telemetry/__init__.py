"""
Telemetry components for simulation observability.
"""

from cvqkd.telemetry.telemetry import (
    TelemetryService,
    get_telemetry_service,
    reset_telemetry_service,
)

__all__ = [
    "TelemetryService",
    "get_telemetry_service",
    "reset_telemetry_service",
]
