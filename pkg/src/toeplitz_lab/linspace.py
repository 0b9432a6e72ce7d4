"""Subspace algebra: orthonormalization, projection, complement,
intersection, orthogonal difference, Krylov closure and principal angles.
"""

from __future__ import annotations

from ._linspace import Subspace
from ._linspace import complement
from ._linspace import intersect
from ._linspace import invariance_residual
from ._linspace import krylov_closure
from ._linspace import ominus
from ._linspace import orthonormalize
from ._linspace import principal_angles
from ._linspace import project

__all__ = (
    "Subspace",
    "complement",
    "intersect",
    "invariance_residual",
    "krylov_closure",
    "ominus",
    "orthonormalize",
    "principal_angles",
    "project",
)
