"""Finite-truncation model of the vector-valued Hardy space.

Functions are held either as Taylor coefficient matrices or as coordinates
in a Wold frame `⊕ₙ Bⁿ(K_B ⊗ ℂᵐ)` truncated to `N` blocks. Coordinates are
flat vectors indexed by `((n·l) + j)·m + s` with block `n`, model index `j`
and fiber index `s`, all counted from zero.
"""

from __future__ import annotations

import logging
import math
import sys
from dataclasses import dataclass
from dataclasses import replace
from functools import cached_property
from typing import TYPE_CHECKING
from typing import Any

if sys.version_info >= (3, 11):
    from typing import Self
else:
    from typing_extensions import Self

import numpy as np

from ._blaschke import BlaschkeProduct
from ._blaschke import factor_series
from ._blaschke import kernel_series
from ._blaschke import series_product
from ._exceptions import FrameMismatchError
from ._exceptions import LabError
from ._exceptions import StandingAssumptionError
from ._utility import array_to_pairs
from ._utility import pairs_to_array

if TYPE_CHECKING:
    from collections.abc import Sequence

    from ._types import ComplexArray


log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ModelBasis:
    """Takenaka–Malmquist basis of the model space `K_B` in Taylor form.

    Params:
        blaschke: Product whose model space is spanned.
        degree: Taylor truncation degree.
        tm_coeffs: `l × (degree + 1)` matrix, row j holds `e_j`.
    """

    blaschke: BlaschkeProduct
    degree: int
    tm_coeffs: ComplexArray

    def gram(self) -> ComplexArray:
        """Taylor-side Gram matrix of the basis functions."""
        return self.tm_coeffs.conj() @ self.tm_coeffs.T

    @property
    def tolerance(self) -> float:
        """Bound on the deviation of the Gram matrix from the identity."""
        rho = self.blaschke.max_modulus
        if rho == 0:
            return 0.0
        return 10 * rho ** (2 * (self.degree - self.blaschke.degree))


def tm_basis(B: BlaschkeProduct, degree: int) -> ModelBasis:
    """Build the Takenaka–Malmquist functions of `B` through `degree`.

    `e_k = √(1 - |w_k|²) / (1 - w̄_k z) · ∏_{i<k} (z - wᵢ) / (1 - w̄ᵢ z)`.

    Args:
        B: Product of degree at least one.
        degree: Taylor degree, at least the degree of `B`.

    Raises:
        LabError: If `B` is constant or `degree` is too small.

    Returns:
        The basis with one Taylor row per zero.
    """
    if B.degree < 1:
        msg = "The model space of a constant product is trivial."
        raise LabError(msg)
    if degree < B.degree:
        msg = f"Taylor degree {degree} below the product degree {B.degree}."
        raise LabError(msg)

    rows = np.zeros((B.degree, degree + 1), dtype=np.complex128)
    partial = np.zeros(degree + 1, dtype=np.complex128)
    partial[0] = 1.0
    for k, w in enumerate(B.zeros):
        scale = math.sqrt(1.0 - abs(w) ** 2)
        rows[k] = scale * series_product(
            partial, kernel_series(w, degree), degree
        )
        partial = series_product(partial, factor_series(w, degree), degree)

    return ModelBasis(B, degree, rows)


@dataclass(frozen=True)
class WoldFrame:
    """Orthonormal coordinate system `{Bⁿ e_j E_s}` truncated to N blocks.

    Frames compare equal when built on the same product, fiber, block count
    and Taylor degree. Taylor data is computed lazily so frames with many
    blocks stay cheap as long as only coordinates are used.

    Params:
        blaschke: The product B (degree l).
        fiber: Fiber dimension m, zero is allowed.
        blocks: Number of Wold blocks N.
        degree: Taylor truncation degree D.
    """

    blaschke: BlaschkeProduct
    fiber: int
    blocks: int
    degree: int

    @property
    def model_dim(self) -> int:
        """Dimension l of the model space."""
        return self.blaschke.degree

    @property
    def block_dim(self) -> int:
        """Coordinates per block, `l·m`."""
        return self.model_dim * self.fiber

    @property
    def dim(self) -> int:
        """Total dimension `N·l·m`."""
        return self.blocks * self.block_dim

    @property
    def shape(self) -> tuple[int, int, int]:
        """Block, model and fiber extents of the coordinate array."""
        return (self.blocks, self.model_dim, self.fiber)

    def index(self, n: int, j: int, s: int) -> int:
        """Flat coordinate of block `n`, model index `j`, fiber `s`."""
        if not (
            0 <= n < self.blocks
            and 0 <= j < self.model_dim
            and 0 <= s < self.fiber
        ):
            msg = f"Index {(n, j, s)} outside frame of shape {self.shape}."
            raise LabError(msg)
        return (n * self.model_dim + j) * self.fiber + s

    @cached_property
    def basis(self) -> ModelBasis:
        """Takenaka–Malmquist basis of the frame's model space."""
        return tm_basis(self.blaschke, self.degree)

    @cached_property
    def scalar_rows(self) -> ComplexArray:
        """Taylor rows of the scalar frame functions `Bⁿ e_j`.

        Row `n·l + j` holds `Bⁿ e_j`.
        """
        l, D = self.model_dim, self.degree
        rows = np.zeros((self.blocks * l, D + 1), dtype=np.complex128)
        b_series = self.blaschke.taylor(D)
        power = np.zeros(D + 1, dtype=np.complex128)
        power[0] = 1.0
        for n in range(self.blocks):
            for j in range(l):
                rows[n * l + j] = series_product(
                    power, self.basis.tm_coeffs[j], D
                )
            power = series_product(power, b_series, D)
        return rows

    def gram(self) -> ComplexArray:
        """Taylor-side Gram matrix of the scalar frame functions."""
        return self.scalar_rows.conj() @ self.scalar_rows.T

    def with_blocks(self, blocks: int) -> WoldFrame:
        """Same frame with a different block count."""
        return replace(self, blocks=blocks)

    def with_fiber(self, fiber: int) -> WoldFrame:
        """Same frame over a different fiber dimension."""
        return replace(self, fiber=fiber)

    def as_blocks(self, coords: ComplexArray) -> ComplexArray:
        """View flat coordinates as `(N, l, m, ...)`."""
        return coords.reshape(self.shape + coords.shape[1:])

    def shift_back(self, coords: ComplexArray) -> ComplexArray:
        """Block left shift: block n moves to n - 1, block 0 is dropped."""
        blocks = self.as_blocks(coords)
        shifted = np.zeros_like(blocks)
        shifted[:-1] = blocks[1:]
        return shifted.reshape(coords.shape)

    def shift_forward(
        self, coords: ComplexArray, steps: int = 1
    ) -> ComplexArray:
        """Block right shift by `steps`; mass past the last block is lost."""
        blocks = self.as_blocks(coords)
        shifted = np.zeros_like(blocks)
        if steps < self.blocks:
            shifted[steps:] = blocks[: self.blocks - steps]
        return shifted.reshape(coords.shape)

    def head_block(self, coords: ComplexArray) -> ComplexArray:
        """Keep block 0 only, the component in `K_Φ`."""
        blocks = self.as_blocks(coords)
        kept = np.zeros_like(blocks)
        kept[0] = blocks[0]
        return kept.reshape(coords.shape)

    def off_model_norm(self, coords: ComplexArray) -> float:
        """Norm of the coordinates with model index other than zero."""
        return float(np.linalg.norm(self.as_blocks(coords)[:, 1:]))

    def tail_norm(self, coords: ComplexArray, blocks: int) -> float:
        """Norm of the coordinates at block index `blocks` and above."""
        return float(np.linalg.norm(self.as_blocks(coords)[blocks:]))

    def resize(
        self, coords: ComplexArray, target: WoldFrame
    ) -> ComplexArray:
        """Carry coordinates to a frame that only differs in block count.

        Extra blocks are zero filled, missing blocks are cut.
        """
        if replace(target, blocks=self.blocks) != self:
            raise FrameMismatchError(self.descriptor(), target.descriptor())
        blocks = self.as_blocks(coords)
        out = np.zeros(target.shape + coords.shape[1:], dtype=np.complex128)
        keep = min(self.blocks, target.blocks)
        out[:keep] = blocks[:keep]
        return out.reshape((target.dim, *coords.shape[1:]))

    def descriptor(self) -> dict[str, Any]:
        """Serializable description used for replay and comparison."""
        return {
            "zeros": self.blaschke.to_json(),
            "m": self.fiber,
            "N": self.blocks,
            "D": self.degree,
        }

    @classmethod
    def from_descriptor(cls, payload: dict[str, Any]) -> WoldFrame:
        """Inverse of [descriptor][toeplitz_lab.hardy.WoldFrame.descriptor]."""
        return cls(
            BlaschkeProduct.from_json(payload["zeros"]),
            int(payload["m"]),
            int(payload["N"]),
            int(payload["D"]),
        )


def frame_build(
    B: BlaschkeProduct,
    m: int,
    N: int,
    D: int,
    *,
    operator_domain: bool = True,
) -> WoldFrame:
    """Build a Wold frame and validate its parameters.

    Args:
        B: The product B.
        m: Fiber dimension, zero gives the legal zero-dimensional frame.
        N: Block count, at least one.
        D: Taylor degree, at least the degree of `B`.
        operator_domain: Enforce the standing assumption `B(0) = 0`.

    Raises:
        StandingAssumptionError: If `B(0) != 0` for an operator domain.
        LabError: On out of range sizes.

    Returns:
        The frame.
    """
    if operator_domain and not B.vanishes_at_origin:
        msg = f"Frame symbol with zeros {B.zeros} does not vanish at 0."
        raise StandingAssumptionError(msg)
    if N < 1 or m < 0 or D < B.degree:
        msg = f"Invalid frame sizes m={m}, N={N}, D={D}."
        raise LabError(msg)
    return WoldFrame(B, m, N, D)


def concat_frames(fp: WoldFrame, fm: WoldFrame) -> WoldFrame:
    """Frame over `ℂ^{p+m}` whose fibers list those of `fp` then `fm`.

    Raises:
        FrameMismatchError: If the products, block counts or degrees differ.
    """
    if fp.with_fiber(fm.fiber) != fm:
        raise FrameMismatchError(fp.descriptor(), fm.descriptor())
    return fp.with_fiber(fp.fiber + fm.fiber)


def join_fibers(
    frames: Sequence[WoldFrame], parts: Sequence[ComplexArray]
) -> ComplexArray:
    """Concatenate coordinate arrays along the fiber axis.

    Args:
        frames: Frames of the parts, equal apart from the fiber.
        parts: Flat coordinate arrays, optionally with trailing columns.

    Returns:
        Flat coordinates in the concatenated frame.
    """
    blocks = [f.as_blocks(c) for f, c in zip(frames, parts)]
    joined = np.concatenate(blocks, axis=2)
    total = frames[0].with_fiber(sum(f.fiber for f in frames))
    return joined.reshape((total.dim, *parts[0].shape[1:]))


def split_fibers(
    frame: WoldFrame, coords: ComplexArray, fibers: Sequence[int]
) -> list[ComplexArray]:
    """Inverse of [join_fibers][toeplitz_lab.hardy.join_fibers]."""
    blocks = frame.as_blocks(coords)
    parts: list[ComplexArray] = []
    start = 0
    for f in fibers:
        piece = np.ascontiguousarray(blocks[:, :, start : start + f])
        parts.append(piece.reshape((-1, *coords.shape[1:])))
        start += f
    return parts


@dataclass(eq=False)
class H2Element:
    """Function in `H²(𝔻, ℂᵐ)` held as truncated Taylor coefficients.

    Params:
        coeffs: `m × (D + 1)` matrix, row s holds component s.
    """

    coeffs: ComplexArray

    def __post_init__(self) -> None:
        self.coeffs = np.atleast_2d(np.asarray(self.coeffs, np.complex128))

    @property
    def fiber(self) -> int:
        """Fiber dimension m."""
        return int(self.coeffs.shape[0])

    @property
    def degree(self) -> int:
        """Taylor degree D."""
        return int(self.coeffs.shape[1] - 1)

    @classmethod
    def constant(cls, s: int, m: int, degree: int) -> H2Element:
        """The constant function `E_s`."""
        coeffs = np.zeros((m, degree + 1), dtype=np.complex128)
        coeffs[s, 0] = 1.0
        return cls(coeffs)

    @classmethod
    def from_scalar(
        cls, series: ComplexArray, s: int = 0, m: int = 1
    ) -> H2Element:
        """Scalar series placed in component `s` of `ℂᵐ`."""
        coeffs = np.zeros((m, len(series)), dtype=np.complex128)
        coeffs[s] = series
        return cls(coeffs)

    def _check(self, other: H2Element) -> None:
        if self.coeffs.shape != other.coeffs.shape:
            raise FrameMismatchError(self.coeffs.shape, other.coeffs.shape)

    def inner(self, other: H2Element) -> complex:
        """`⟨self, other⟩`, linear in the first argument."""
        self._check(other)
        return complex(np.vdot(other.coeffs, self.coeffs))

    def norm(self) -> float:
        """Hardy space norm."""
        return float(np.linalg.norm(self.coeffs))

    def __add__(self, other: H2Element) -> H2Element:
        self._check(other)
        return H2Element(self.coeffs + other.coeffs)

    def __sub__(self, other: H2Element) -> H2Element:
        self._check(other)
        return H2Element(self.coeffs - other.coeffs)

    def __rmul__(self, scalar: complex) -> H2Element:
        return H2Element(scalar * self.coeffs)

    def to_json(self) -> dict[str, Any]:
        """`{m, D, rows}` with `[re, im]` pairs."""
        return {"m": self.fiber, "D": self.degree} | array_to_pairs(
            self.coeffs
        )

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> H2Element:
        """Inverse of [to_json][toeplitz_lab.hardy.H2Element.to_json]."""
        return cls(pairs_to_array(payload))


@dataclass(eq=False)
class WoldVector:
    """Element of a frame held by its coordinates.

    Params:
        frame: The frame the coordinates refer to.
        coords: Flat complex coordinate vector of length `frame.dim`.
    """

    frame: WoldFrame
    coords: ComplexArray

    def __post_init__(self) -> None:
        self.coords = np.asarray(self.coords, dtype=np.complex128).ravel()
        if self.coords.size != self.frame.dim:
            raise FrameMismatchError(self.frame.dim, self.coords.size)

    @classmethod
    def zeros(cls, frame: WoldFrame) -> WoldVector:
        """The zero vector of `frame`."""
        return cls(frame, np.zeros(frame.dim, dtype=np.complex128))

    @classmethod
    def unit(cls, frame: WoldFrame, n: int, j: int, s: int) -> WoldVector:
        """Frame function `Bⁿ e_j E_s`."""
        vector = cls.zeros(frame)
        vector.coords[frame.index(n, j, s)] = 1.0
        return vector

    def _check(self, other: WoldVector) -> None:
        if other.frame != self.frame:
            raise FrameMismatchError(
                self.frame.descriptor(), other.frame.descriptor()
            )

    def inner(self, other: WoldVector) -> complex:
        """`⟨self, other⟩`, linear in the first argument."""
        self._check(other)
        return complex(np.vdot(other.coords, self.coords))

    def norm(self) -> float:
        """Norm, equal to the Euclidean norm of the coordinates."""
        return float(np.linalg.norm(self.coords))

    def __add__(self, other: WoldVector) -> Self:
        self._check(other)
        return type(self)(self.frame, self.coords + other.coords)

    def __sub__(self, other: WoldVector) -> Self:
        self._check(other)
        return type(self)(self.frame, self.coords - other.coords)

    def __rmul__(self, scalar: complex) -> Self:
        return type(self)(self.frame, scalar * self.coords)

    def embed(self, frame: WoldFrame) -> WoldVector:
        """Carry the vector into a frame with another block count."""
        return WoldVector(frame, self.frame.resize(self.coords, frame))

    def truncate(self, frame: WoldFrame) -> tuple[WoldVector, float]:
        """Cut the vector down to a frame with fewer blocks.

        Returns:
            The truncated vector and the norm of the dropped blocks.
        """
        lost = self.frame.tail_norm(self.coords, frame.blocks)
        return self.embed(frame), lost

    def is_model_supported(self, tol: float) -> bool:
        """Whether the coordinates vanish off model index zero.

        This is the coordinate form of `R̃∘B`-type data.
        """
        return self.frame.off_model_norm(self.coords) <= tol

    def to_json(self) -> dict[str, Any]:
        """Frame descriptor and coordinates as `[re, im]` pairs."""
        return {
            "frame": self.frame.descriptor(),
            "coords": array_to_pairs(self.coords),
        }

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> WoldVector:
        """Inverse of [to_json][toeplitz_lab.hardy.WoldVector.to_json]."""
        frame = WoldFrame.from_descriptor(payload["frame"])
        return cls(frame, pairs_to_array(payload["coords"]))


def to_wold(F: H2Element, frame: WoldFrame) -> tuple[WoldVector, float]:
    """Coordinates of `F` in `frame` and the norm of what is left over.

    The caller decides whether the residual is acceptable; it is the part of
    `F` outside the truncated frame plus Taylor truncation error.

    Raises:
        FrameMismatchError: If fiber or Taylor degree differ.
    """
    if F.fiber != frame.fiber or F.degree != frame.degree:
        raise FrameMismatchError(
            (frame.fiber, frame.degree), (F.fiber, F.degree)
        )
    rows = frame.scalar_rows
    block_coords = rows.conj() @ F.coeffs.T
    vector = WoldVector(frame, block_coords.ravel())
    residual = (F - from_wold(vector)).norm()
    return vector, residual


def from_wold(v: WoldVector) -> H2Element:
    """Taylor form of a frame vector."""
    frame = v.frame
    block_coords = v.coords.reshape(
        frame.blocks * frame.model_dim, frame.fiber
    )
    return H2Element((frame.scalar_rows.T @ block_coords).T)


def inner(F: H2Element, G: H2Element) -> complex:
    """Hardy space inner product of two Taylor form elements."""
    return F.inner(G)


def norm(F: H2Element) -> float:
    """Hardy space norm of a Taylor form element."""
    return F.norm()
