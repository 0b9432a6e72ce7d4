"""Operator matrices: block shifts, multipliers and rank-one perturbations.

Examples:
    >>> from toeplitz_lab.blaschke import BlaschkeProduct
    >>> from toeplitz_lab.hardy import frame_build
    >>> from toeplitz_lab.toeplitz import toeplitz_adjoint
    >>> frame = frame_build(BlaschkeProduct.monomial(1), 1, 3, 8)
    >>> toeplitz_adjoint(frame).mat.real
    array([[0., 1., 0.],
           [0., 0., 1.],
           [0., 0., 0.]])
"""

from __future__ import annotations

from ._toeplitz import OperatorMatrix
from ._toeplitz import c0_decay
from ._toeplitz import column_multiplier
from ._toeplitz import multiplier_matrix
from ._toeplitz import perturbed_backward
from ._toeplitz import perturbed_forward
from ._toeplitz import range_in_frame
from ._toeplitz import rank_one
from ._toeplitz import settling_step
from ._toeplitz import toeplitz_adjoint
from ._toeplitz import toeplitz_forward

__all__ = (
    "OperatorMatrix",
    "c0_decay",
    "column_multiplier",
    "multiplier_matrix",
    "perturbed_backward",
    "perturbed_forward",
    "range_in_frame",
    "rank_one",
    "settling_step",
    "toeplitz_adjoint",
    "toeplitz_forward",
)
