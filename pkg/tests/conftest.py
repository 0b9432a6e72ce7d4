from __future__ import annotations

import numpy as np
import pytest

from toeplitz_lab.blaschke import BlaschkeProduct
from toeplitz_lab.hardy import WoldVector
from toeplitz_lab.hardy import frame_build


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20250206))


@pytest.fixture
def make_frame():
    def build(zeros=(0,), m=1, N=4, D=60):
        return frame_build(BlaschkeProduct.from_zeros(zeros), m, N, D)

    return build


@pytest.fixture
def shift_frame(make_frame):
    """`B = z`, scalar fiber, four blocks."""
    return make_frame()


@pytest.fixture
def unit(shift_frame):
    def build(n, frame=None):
        return WoldVector.unit(frame or shift_frame, n, 0, 0)

    return build


@pytest.fixture
def random_vector(rng):
    def draw(frame):
        coords = rng.uniform(-1, 1, frame.dim) + 1j * rng.uniform(
            -1, 1, frame.dim
        )
        return WoldVector(frame, coords / np.linalg.norm(coords))

    return draw
