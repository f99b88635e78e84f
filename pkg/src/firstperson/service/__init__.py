"""HTTP surfaces: the control service and the attestation service."""

from .attest import create_attestation_app
from .control import create_control_app
from .live import LiveHub, LiveSubscription

__all__ = ["LiveHub", "LiveSubscription", "create_attestation_app", "create_control_app"]
