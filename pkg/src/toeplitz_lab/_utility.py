"""Utilities for serializing complex data and small numerical helpers."""

from __future__ import annotations

from typing import TYPE_CHECKING
from typing import Any

import numpy as np
import scipy.linalg as spla

from ._exceptions import ScenarioFormatError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from ._types import ComplexArray
    from ._types import ComplexPair


def complex_to_pair(value: complex) -> ComplexPair:
    """Convert a complex number to its `[re, im]` form.

    Args:
        value: Number to convert.

    Returns:
        A two element list of floats.
    """
    value = complex(value)
    return [value.real, value.imag]


def pair_to_complex(pair: Sequence[float]) -> complex:
    """Convert an `[re, im]` pair back into a complex number.

    Args:
        pair: Two element sequence of real numbers.

    Raises:
        ScenarioFormatError: If the pair does not have exactly two entries.

    Returns:
        The complex number.
    """
    if len(pair) != 2:
        msg = f"Expected an [re, im] pair, got {pair!r}."
        raise ScenarioFormatError(msg)
    return complex(float(pair[0]), float(pair[1]))


def array_to_pairs(array: ComplexArray) -> dict[str, Any]:
    """Serialize a complex array row-major as `[re, im]` pairs.

    Args:
        array: Array of any shape.

    Returns:
        Mapping with the `shape` and the flattened `data` pairs.
    """
    flat = np.asarray(array, dtype=np.complex128).ravel(order="C")
    return {
        "shape": list(np.shape(array)),
        "data": [[float(v.real), float(v.imag)] for v in flat],
    }


def pairs_to_array(payload: dict[str, Any]) -> ComplexArray:
    """Inverse of [array_to_pairs][toeplitz_lab.utility.array_to_pairs].

    Args:
        payload: Mapping with `shape` and `data` keys.

    Raises:
        ScenarioFormatError: If the data does not fill the shape.

    Returns:
        The complex array.
    """
    try:
        shape = tuple(int(s) for s in payload["shape"])
        data = np.array(
            [pair_to_complex(p) for p in payload["data"]],
            dtype=np.complex128,
        )
    except (KeyError, TypeError) as err:
        msg = f"Malformed array payload: {err}."
        raise ScenarioFormatError(msg) from err

    if data.size != int(np.prod(shape, dtype=np.int64)):
        msg = f"Array data of length {data.size} does not fill {shape}."
        raise ScenarioFormatError(msg)
    return data.reshape(shape)


def spectral_norm(matrix: ComplexArray) -> float:
    """Largest singular value, zero for empty matrices."""
    if matrix.size == 0:
        return 0.0
    return float(spla.svdvals(matrix)[0])
