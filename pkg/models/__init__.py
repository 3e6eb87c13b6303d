"""
Result and configuration models for APEX DualBounds.

Pydantic v2 models shared across the library, the experiment workflow and
the CLI. Report rows and configs serialize to canonical JSON.
"""

from models.bounds import BoundEstimate, DualityReport, PenaltyKind

__all__ = ["BoundEstimate", "DualityReport", "PenaltyKind"]
