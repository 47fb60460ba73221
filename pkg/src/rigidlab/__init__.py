"""Measurement-map rigidity, distinct-value censuses and isometry energy at desk scale."""
from __future__ import annotations

__version__ = "0.1.0"
