"""Finite Blaschke products with the unimodular constant fixed to one."""

from __future__ import annotations

import cmath
import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING
from typing import Any

import numpy as np

from ._exceptions import LabError
from ._utility import complex_to_pair
from ._utility import pair_to_complex

if TYPE_CHECKING:
    from collections.abc import Iterable
    from collections.abc import Sequence

    from ._types import ComplexArray

log = logging.getLogger(__name__)


def _zero_key(w: complex) -> tuple[int, float, float, float]:
    if w == 0:
        return (0, 0.0, 0.0, 0.0)
    return (1, abs(w), cmath.phase(w), w.real)


def factor_series(w: complex, degree: int) -> ComplexArray:
    """Taylor coefficients of `(z - w) / (1 - w̄z)` through `degree`.

    Long division of the numerator by the geometric series of the
    denominator gives `-w` followed by `(1 - |w|²)·w̄ⁿ⁻¹`.

    Args:
        w: Zero of the factor.
        degree: Truncation degree.

    Returns:
        Coefficient vector of length `degree + 1`.
    """
    coeffs = np.zeros(degree + 1, dtype=np.complex128)
    coeffs[0] = -w
    if degree >= 1:
        powers = np.conj(w) ** np.arange(degree, dtype=np.float64)
        coeffs[1:] = (1.0 - abs(w) ** 2) * powers
    return coeffs


def kernel_series(w: complex, degree: int) -> ComplexArray:
    """Taylor coefficients of `1 / (1 - w̄z)` through `degree`."""
    return np.conj(w) ** np.arange(degree + 1, dtype=np.float64) + 0j


def series_product(
    left: ComplexArray, right: ComplexArray, degree: int
) -> ComplexArray:
    """Cauchy product of two coefficient vectors truncated at `degree`."""
    return np.convolve(left, right)[: degree + 1]


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product determined by its zero multiset.

    Zeros are stored in canonical order: zeros at the origin first, then the
    rest sorted by modulus, argument and real part. Two products with equal
    zero multisets compare equal.

    Params:
        zeros: Zeros with multiplicity, each of modulus below one.

    Examples:
        >>> B = BlaschkeProduct.from_zeros([0, 0.5])
        >>> B(0.5)
        0j
    """

    zeros: tuple[complex, ...]

    def __post_init__(self) -> None:
        zeros = tuple(complex(w) for w in self.zeros)
        for w in zeros:
            if not abs(w) < 1:
                msg = f"Blaschke zero {w} does not lie in the open disk."
                raise LabError(msg)
        object.__setattr__(self, "zeros", tuple(sorted(zeros, key=_zero_key)))

    @classmethod
    def from_zeros(cls, zeros: Iterable[complex]) -> BlaschkeProduct:
        """Build a product from zeros in any order."""
        return cls(tuple(zeros))

    @classmethod
    def monomial(cls, degree: int) -> BlaschkeProduct:
        """The product `zᵈ`."""
        return cls((0j,) * degree)

    @property
    def degree(self) -> int:
        """Number of zeros counted with multiplicity."""
        return len(self.zeros)

    @property
    def vanishes_at_origin(self) -> bool:
        """Whether B(0) = 0."""
        return any(w == 0 for w in self.zeros)

    @property
    def origin_only(self) -> bool:
        """Whether every zero sits at the origin, so B is a monomial."""
        return all(w == 0 for w in self.zeros)

    @cached_property
    def max_modulus(self) -> float:
        """Largest zero modulus, zero for monomials."""
        return max((abs(w) for w in self.zeros), default=0.0)

    def __call__(self, z: complex | ComplexArray) -> Any:
        """Evaluate the product at `z`, scalar or array."""
        z_arr = np.asarray(z, dtype=np.complex128)
        value = np.ones_like(z_arr)
        for w in self.zeros:
            value = value * (z_arr - w) / (1.0 - np.conj(w) * z_arr)
        if np.ndim(z) == 0:
            return complex(value)
        return value

    def taylor(self, degree: int) -> ComplexArray:
        """Maclaurin coefficients through `degree`.

        Args:
            degree: Truncation degree, at least zero.

        Raises:
            LabError: On a negative degree.

        Returns:
            Coefficient vector of length `degree + 1`.
        """
        if degree < 0:
            msg = f"Taylor degree must be non-negative, got {degree}."
            raise LabError(msg)
        coeffs = np.zeros(degree + 1, dtype=np.complex128)
        coeffs[0] = 1.0
        for w in self.zeros:
            coeffs = series_product(coeffs, factor_series(w, degree), degree)
        return coeffs

    def divides(self, other: BlaschkeProduct) -> bool:
        """Whether this zero multiset is contained in the one of `other`.

        Matching uses exact equality of the stored values.
        """
        return not (Counter(self.zeros) - Counter(other.zeros))

    def __mul__(self, other: BlaschkeProduct) -> BlaschkeProduct:
        return BlaschkeProduct(self.zeros + other.zeros)

    def to_json(self) -> list[list[float]]:
        """Zeros as `[re, im]` pairs in canonical order."""
        return [complex_to_pair(w) for w in self.zeros]

    @classmethod
    def from_json(cls, payload: Sequence[Sequence[float]]) -> BlaschkeProduct:
        """Inverse of [to_json][toeplitz_lab.blaschke.BlaschkeProduct.to_json]."""
        return cls(tuple(pair_to_complex(p) for p in payload))


def evaluate(B: BlaschkeProduct, z: complex) -> complex:
    """Value of `B` at a point of the closed disk."""
    return complex(B(z))


def taylor(B: BlaschkeProduct, degree: int) -> ComplexArray:
    """Maclaurin coefficients of `B` through `degree`."""
    return B.taylor(degree)


def divides(B: BlaschkeProduct, Bp: BlaschkeProduct) -> bool:
    """Whether `B` divides `Bp` as a multiset of zeros."""
    return B.divides(Bp)


def compose_power_series(
    blocks: Sequence[ComplexArray] | ComplexArray,
    B: BlaschkeProduct,
    degree: int,
) -> ComplexArray:
    """Taylor coefficients of `Σₙ Aₙ Bⁿ` through `degree`.

    Accumulates Horner style in the truncated series algebra so only one
    multiplication by the series of B happens per block.

    Args:
        blocks: Vectors `Aₙ`, all of the same length `p`.
        B: The Blaschke product.
        degree: Truncation degree.

    Returns:
        Matrix of shape `(p, degree + 1)`; row s holds component s.
    """
    stacked = np.asarray(blocks, dtype=np.complex128)
    if stacked.ndim == 1:
        stacked = stacked.reshape(-1, 1)

    p = stacked.shape[1]
    b_series = B.taylor(degree)
    result = np.zeros((p, degree + 1), dtype=np.complex128)
    for block in stacked[::-1]:
        for s in range(p):
            result[s] = series_product(result[s], b_series, degree)
        result[:, 0] += block
    return result
