"""Toeplitz Lab."""

from __future__ import annotations

from .__about__ import __version__

__version__ = __version__
