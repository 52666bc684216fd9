"""
Telemetry for simulation runs.

Exports OpenTelemetry spans to Azure Application Insights when
APPLICATIONINSIGHTS_CONNECTION_STRING is set, or to the console when
CVQKD_TELEMETRY_CONSOLE=1. A sweep opens one request span and records one
event per SNR point; telemetry failures never interrupt a sweep.
"""

import logging
import os
from typing import Any, Dict, Optional

from cvqkd import __version__

try:
    from azure.monitor.opentelemetry import configure_azure_monitor
    from opentelemetry import trace
    from opentelemetry.sdk.resources import Resource
    from opentelemetry.sdk.trace import TracerProvider
    from opentelemetry.sdk.trace.export import ConsoleSpanExporter, SimpleSpanProcessor

    OPENTELEMETRY_AVAILABLE = True
except ImportError:
    logging.warning("OpenTelemetry packages not installed. Telemetry disabled.")
    configure_azure_monitor = None
    trace = None
    Resource = None
    TracerProvider = None
    ConsoleSpanExporter = None
    SimpleSpanProcessor = None
    OPENTELEMETRY_AVAILABLE = False

logger = logging.getLogger(__name__)


class TelemetryService:
    """Manages span export for simulation runs."""

    def __init__(self, service_name: str = "cvqkd-reconciliation"):
        """
        Initialize telemetry from the environment.

        Args:
            service_name: Name of the service for telemetry tagging
        """
        self.enabled = False
        self.tracer = None
        self.service_name = service_name

        connection_string = os.getenv("APPLICATIONINSIGHTS_CONNECTION_STRING")
        console = os.getenv("CVQKD_TELEMETRY_CONSOLE") == "1"

        if not connection_string and not console:
            logger.warning(
                "Neither APPLICATIONINSIGHTS_CONNECTION_STRING nor "
                "CVQKD_TELEMETRY_CONSOLE set. Telemetry disabled."
            )
            return

        if not OPENTELEMETRY_AVAILABLE:
            logger.warning("OpenTelemetry SDK not available. Telemetry disabled.")
            return

        try:
            resource = Resource.create(
                {
                    "service.name": service_name,
                    "service.version": __version__,
                    "deployment.environment": os.getenv("ENVIRONMENT", "local"),
                }
            )
            if connection_string:
                configure_azure_monitor(connection_string=connection_string, resource=resource)
                self.tracer = trace.get_tracer(__name__)
                exporter = "azure-monitor"
            else:
                provider = TracerProvider(resource=resource)
                provider.add_span_processor(SimpleSpanProcessor(ConsoleSpanExporter()))
                self.tracer = provider.get_tracer(__name__)
                exporter = "console"
            self.enabled = True
            logger.info(f"Telemetry configured (exporter={exporter})")

        except Exception:
            logger.exception("Error configuring telemetry")
            self.enabled = False

    @staticmethod
    def _set_properties(span, properties: Optional[Dict[str, Any]]) -> None:
        if properties:
            for key, value in properties.items():
                span.set_attribute(key, str(value))

    def track_request(
        self, name: str, properties: Optional[Dict[str, Any]] = None
    ) -> Optional[Any]:
        """
        Start a span for a long-running operation; the caller ends it.

        Returns:
            Span object if telemetry is enabled, None otherwise
        """
        if not self.enabled or not self.tracer:
            return None

        try:
            span = self.tracer.start_span(name)
            self._set_properties(span, properties)
            return span

        except Exception:
            logger.exception(f"Error tracking request: {name}")
            return None

    def track_event(self, name: str, properties: Optional[Dict[str, Any]] = None) -> None:
        """Record a custom event."""
        if not self.enabled or not self.tracer:
            return

        try:
            with self.tracer.start_as_current_span(name) as span:
                span.set_attribute("event.type", "custom")
                self._set_properties(span, properties)

            logger.debug(f"Tracked event: {name}")

        except Exception:
            logger.exception(f"Error tracking event: {name}")

    def track_exception(
        self, exception: Exception, properties: Optional[Dict[str, Any]] = None
    ) -> None:
        """Record an exception with its error code when it has one."""
        if not self.enabled or not self.tracer:
            return

        try:
            with self.tracer.start_as_current_span("exception") as span:
                span.set_attribute("exception.type", type(exception).__name__)
                span.set_attribute("exception.message", str(exception))
                error_code = getattr(exception, "error_code", None)
                if error_code:
                    span.set_attribute("exception.error_code", error_code)
                span.record_exception(exception)
                self._set_properties(span, properties)

            logger.error(f"Tracked exception: {type(exception).__name__}")

        except Exception:
            logger.exception("Error tracking exception")

    def track_sweep_point(
        self, row: Dict[str, Any], properties: Optional[Dict[str, Any]] = None
    ) -> None:
        """Record one finished SNR point of a BLER sweep."""
        if not self.enabled or not self.tracer:
            return

        try:
            with self.tracer.start_as_current_span("sweep.point") as span:
                for key, value in row.items():
                    span.set_attribute(f"sweep.{key}", value)
                self._set_properties(span, properties)

        except Exception:
            logger.exception("Error tracking sweep point")

    def track_workflow_step(
        self,
        step_id: str,
        duration_ms: float,
        success: bool = True,
        properties: Optional[Dict[str, Any]] = None,
    ) -> None:
        """Record a CLI step such as codec construction or output emission."""
        if not self.enabled or not self.tracer:
            return

        try:
            with self.tracer.start_as_current_span(f"workflow.step.{step_id}") as span:
                span.set_attribute("workflow.step_id", step_id)
                span.set_attribute("workflow.success", success)
                span.set_attribute("workflow.duration_ms", duration_ms)
                self._set_properties(span, properties)

            logger.debug(f"Tracked workflow step: {step_id}")

        except Exception:
            logger.exception(f"Error tracking workflow step: {step_id}")


# Global telemetry service instance
_telemetry_service: Optional[TelemetryService] = None


def get_telemetry_service() -> TelemetryService:
    """Get or create the global telemetry service instance."""
    global _telemetry_service
    if _telemetry_service is None:
        _telemetry_service = TelemetryService()
    return _telemetry_service


def reset_telemetry_service() -> None:
    """Reset the global telemetry service (for testing)."""
    global _telemetry_service
    _telemetry_service = None
