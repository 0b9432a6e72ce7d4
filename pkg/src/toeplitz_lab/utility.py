"""Utilities for converting complex data to and from its serialized form."""

from __future__ import annotations

from ._utility import array_to_pairs
from ._utility import complex_to_pair
from ._utility import pair_to_complex
from ._utility import pairs_to_array

__all__ = (
    "array_to_pairs",
    "complex_to_pair",
    "pair_to_complex",
    "pairs_to_array",
)
