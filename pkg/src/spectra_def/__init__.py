"""Exact Frölicher spectral sequences and deformation obstructions of coframe models."""

from __future__ import annotations

__version__ = "0.1.0"
