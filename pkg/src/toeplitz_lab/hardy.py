"""Taylor and Wold-coordinate models of `H²(𝔻, ℂᵐ)`.

Examples:
    >>> from toeplitz_lab.blaschke import BlaschkeProduct
    >>> from toeplitz_lab.hardy import H2Element, frame_build, to_wold
    >>> frame = frame_build(BlaschkeProduct.monomial(1), 1, 4, 8)
    >>> vector, residual = to_wold(H2Element.constant(0, 1, 8), frame)
    >>> vector.coords.real
    array([1., 0., 0., 0.])
"""

from __future__ import annotations

from ._hardy import H2Element
from ._hardy import ModelBasis
from ._hardy import WoldFrame
from ._hardy import WoldVector
from ._hardy import concat_frames
from ._hardy import frame_build
from ._hardy import from_wold
from ._hardy import inner
from ._hardy import join_fibers
from ._hardy import norm
from ._hardy import split_fibers
from ._hardy import tm_basis
from ._hardy import to_wold

__all__ = (
    "H2Element",
    "ModelBasis",
    "WoldFrame",
    "WoldVector",
    "concat_frames",
    "from_wold",
    "frame_build",
    "inner",
    "join_fibers",
    "norm",
    "split_fibers",
    "tm_basis",
    "to_wold",
)
