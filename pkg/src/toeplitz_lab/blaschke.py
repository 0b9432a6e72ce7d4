"""Arithmetic of finite Blaschke products.

Examples:
    >>> from toeplitz_lab.blaschke import BlaschkeProduct
    >>> B = BlaschkeProduct.from_zeros([0.5])
    >>> B.taylor(3)
    array([-0.5   +0.j,  0.75  +0.j,  0.375 +0.j,  0.1875+0.j])
"""

from __future__ import annotations

from ._blaschke import BlaschkeProduct
from ._blaschke import compose_power_series
from ._blaschke import divides
from ._blaschke import evaluate
from ._blaschke import taylor

__all__ = (
    "BlaschkeProduct",
    "compose_power_series",
    "divides",
    "evaluate",
    "taylor",
)
