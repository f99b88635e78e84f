"""Simulated first-person recorder: capture, enrichment, tamper-evident storage."""

__version__ = "0.1.0"
