from __future__ import annotations

import pytest

from toeplitz_lab.linspace import orthonormalize


@pytest.fixture
def span(unit):
    """Span of `zⁿ` for the given exponents in the scalar shift frame."""

    def build(*indices, frame=None):
        return orthonormalize([unit(n, frame) for n in indices])

    return build


@pytest.fixture
def wide_frame(shift_frame):
    """Scalar shift frame with five blocks, room for a guard band."""
    return shift_frame.with_blocks(5)
