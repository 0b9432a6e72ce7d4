"""Operator matrices on Wold frames."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING
from typing import Any

import numpy as np

from ._blaschke import BlaschkeProduct
from ._blaschke import series_product
from ._exceptions import FrameMismatchError
from ._exceptions import StandingAssumptionError
from ._exceptions import SymbolDegreeError
from ._hardy import H2Element
from ._hardy import WoldFrame
from ._hardy import WoldVector
from ._hardy import from_wold
from ._hardy import tm_basis
from ._hardy import to_wold
from ._linspace import Subspace
from ._linspace import complement
from ._utility import array_to_pairs
from ._utility import pairs_to_array
from .constants import RANK_TOL

if TYPE_CHECKING:
    from collections.abc import Sequence

    from ._types import ComplexArray
    from ._types import Exactness
    from ._types import FloatArray

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense matrix together with its domain and codomain frames.

    Params:
        frame_in: Domain frame.
        frame_out: Codomain frame.
        mat: `dim_out × dim_in` complex matrix.
        exactness: `exact` when the matrix equals the restriction of the
            untruncated operator, `truncation-leaky` when mass can leave
            the codomain frame.
        column_residuals: Conversion residual per column, when the columns
            came from Taylor products.
    """

    frame_in: WoldFrame
    frame_out: WoldFrame
    mat: ComplexArray
    exactness: Exactness = "exact"
    column_residuals: FloatArray | None = None

    def __post_init__(self) -> None:
        expected = (self.frame_out.dim, self.frame_in.dim)
        if self.mat.shape != expected:
            raise FrameMismatchError(expected, self.mat.shape)

    def apply(self, v: WoldVector) -> WoldVector:
        """Image of a frame vector."""
        if v.frame != self.frame_in:
            raise FrameMismatchError(
                self.frame_in.descriptor(), v.frame.descriptor()
            )
        return WoldVector(self.frame_out, self.mat @ v.coords)

    def adjoint(self) -> OperatorMatrix:
        """Conjugate transpose with the frames swapped."""
        return OperatorMatrix(
            self.frame_out,
            self.frame_in,
            self.mat.conj().T,
            self.exactness,
        )

    def _exactness_with(self, other: OperatorMatrix) -> Exactness:
        if "truncation-leaky" in (self.exactness, other.exactness):
            return "truncation-leaky"
        return "exact"

    def __matmul__(self, other: OperatorMatrix) -> OperatorMatrix:
        if self.frame_in != other.frame_out:
            raise FrameMismatchError(
                self.frame_in.descriptor(), other.frame_out.descriptor()
            )
        return OperatorMatrix(
            other.frame_in,
            self.frame_out,
            self.mat @ other.mat,
            self._exactness_with(other),
        )

    def _check_same(self, other: OperatorMatrix) -> None:
        if (self.frame_in, self.frame_out) != (
            other.frame_in,
            other.frame_out,
        ):
            raise FrameMismatchError(self.describe(), other.describe())

    def __add__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check_same(other)
        return OperatorMatrix(
            self.frame_in,
            self.frame_out,
            self.mat + other.mat,
            self._exactness_with(other),
        )

    def __sub__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check_same(other)
        return OperatorMatrix(
            self.frame_in,
            self.frame_out,
            self.mat - other.mat,
            self._exactness_with(other),
        )

    def describe(self) -> dict[str, Any]:
        """Frame descriptors and exactness, without the matrix."""
        return {
            "frame_in": self.frame_in.descriptor(),
            "frame_out": self.frame_out.descriptor(),
            "exactness": self.exactness,
        }

    def to_json(self) -> dict[str, Any]:
        """Frame descriptors, row-major matrix and exactness flag."""
        return self.describe() | {"mat": array_to_pairs(self.mat)}

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> OperatorMatrix:
        """Inverse of [to_json][toeplitz_lab.toeplitz.OperatorMatrix.to_json]."""
        return cls(
            WoldFrame.from_descriptor(payload["frame_in"]),
            WoldFrame.from_descriptor(payload["frame_out"]),
            pairs_to_array(payload["mat"]),
            payload["exactness"],
        )


def _identity(frame: WoldFrame) -> ComplexArray:
    return np.eye(frame.dim, dtype=np.complex128)


def toeplitz_forward(frame: WoldFrame) -> OperatorMatrix:
    """`T_Φ = T_B ⊗ I` as the block right shift.

    The top block is sent to zero, so the matrix is only an isometry on
    vectors supported below the last block.
    """
    mat = frame.shift_forward(_identity(frame))
    return OperatorMatrix(frame, frame, mat, "truncation-leaky")


def toeplitz_adjoint(frame: WoldFrame) -> OperatorMatrix:
    """`T*_Φ` as the block left shift, exact on the truncated frame.

    Raises:
        StandingAssumptionError: If the frame's product does not vanish at 0.
    """
    if not frame.blaschke.vanishes_at_origin:
        msg = "The backward shift needs a symbol vanishing at the origin."
        raise StandingAssumptionError(msg)
    return OperatorMatrix(frame, frame, frame.shift_back(_identity(frame)))


def _symbol_series(
    symbol: BlaschkeProduct | ComplexArray, frame: WoldFrame
) -> ComplexArray:
    D = frame.degree
    if isinstance(symbol, BlaschkeProduct):
        if symbol.degree + frame.blocks * frame.model_dim > D:
            msg = (
                f"Symbol of degree {symbol.degree} does not fit a frame of"
                f" {frame.blocks} blocks at Taylor degree {D}."
            )
            raise SymbolDegreeError(msg)
        return symbol.taylor(D)

    series = np.asarray(symbol, dtype=np.complex128).ravel()
    if series.size > D + 1:
        msg = f"Symbol with {series.size} coefficients exceeds degree {D}."
        raise SymbolDegreeError(msg)
    padded = np.zeros(D + 1, dtype=np.complex128)
    padded[: series.size] = series
    return padded


def multiplier_matrix(
    symbol: BlaschkeProduct | ComplexArray, frame: WoldFrame
) -> OperatorMatrix:
    """Multiplication by a scalar symbol acting as `C ⊗ I`.

    Each column is the Taylor product of the symbol with a frame function,
    brought back with [to_wold][toeplitz_lab.hardy.to_wold].

    Raises:
        SymbolDegreeError: If the symbol needs more Taylor coefficients than
            the frame carries.
    """
    series = _symbol_series(symbol, frame)
    scalar = frame.with_fiber(1)
    rows = scalar.scalar_rows
    columns = np.zeros((scalar.dim, scalar.dim), dtype=np.complex128)
    residuals = np.zeros(scalar.dim)
    for idx, row in enumerate(rows):
        product = H2Element(series_product(row, series, frame.degree))
        coords, residuals[idx] = to_wold(product, scalar)
        columns[:, idx] = coords.coords

    mat = np.kron(columns, np.eye(frame.fiber))
    return OperatorMatrix(
        frame,
        frame,
        mat,
        "truncation-leaky",
        np.repeat(residuals, frame.fiber),
    )


def column_multiplier(F: WoldVector) -> OperatorMatrix:
    """`T_F f = f·F` from the scalar frame into the frame of `F`.

    Column `(n, j)` holds the frame coordinates of `Bⁿ e_j · F`; the part
    of the product outside the frame is recorded as the column residual.
    """
    frame = F.frame
    scalar = frame.with_fiber(1)
    taylor = from_wold(F).coeffs
    mat = np.zeros((frame.dim, scalar.dim), dtype=np.complex128)
    residuals = np.zeros(scalar.dim)
    for idx, row in enumerate(scalar.scalar_rows):
        product = H2Element(
            np.stack(
                [series_product(row, comp, frame.degree) for comp in taylor]
            )
        )
        coords, residuals[idx] = to_wold(product, frame)
        mat[:, idx] = coords.coords
    return OperatorMatrix(scalar, frame, mat, "truncation-leaky", residuals)


def range_in_frame(
    Bp: BlaschkeProduct, frame: WoldFrame, rank_tol: float = RANK_TOL
) -> Subspace:
    """`V_N ∩ T_{B′}H²` as a complemented subspace of `frame`.

    An element of the frame lies in `B′H²` iff it is orthogonal to
    `K_{B′} ⊗ ℂᵐ`, so the range is the complement of the frame projection
    of that model space.

    Raises:
        SymbolDegreeError: If the Taylor degree cannot hold the
            Takenaka–Malmquist functions of `Bp`.
    """
    if Bp.degree == 0:
        return complement(Subspace.zero(frame))
    if Bp.degree > frame.degree:
        msg = f"Product of degree {Bp.degree} exceeds Taylor degree."
        raise SymbolDegreeError(msg)

    model = tm_basis(Bp, frame.degree)
    captured = np.linalg.norm(model.tm_coeffs, axis=1) ** 2
    if np.max(np.abs(captured - 1)) > rank_tol:
        msg = (
            f"Taylor degree {frame.degree} truncates the model space of a"
            f" product with zeros {Bp.zeros}."
        )
        raise SymbolDegreeError(msg)

    scalar = frame.scalar_rows.conj() @ model.tm_coeffs.T
    columns = np.kron(scalar, np.eye(frame.fiber))
    return complement(Subspace.from_columns(frame, columns, rank_tol))


def rank_one(V: WoldVector, U: WoldVector) -> OperatorMatrix:
    """`V ⊗ U: x ↦ ⟨x, U⟩·V`."""
    if V.frame != U.frame:
        raise FrameMismatchError(V.frame.descriptor(), U.frame.descriptor())
    return OperatorMatrix(
        U.frame, V.frame, np.outer(V.coords, U.coords.conj())
    )


def _perturbation(
    frame: WoldFrame, pairs: Sequence[tuple[WoldVector, WoldVector]]
) -> ComplexArray:
    total = np.zeros((frame.dim, frame.dim), dtype=np.complex128)
    for V, U in pairs:
        total += rank_one(V, U).mat
    return total


def perturbed_backward(
    frame: WoldFrame, pairs: Sequence[tuple[WoldVector, WoldVector]]
) -> OperatorMatrix:
    """`T*_Φ - Σ Vᵢ ⊗ Uᵢ`, exact on the frame."""
    base = toeplitz_adjoint(frame)
    return OperatorMatrix(
        frame, frame, base.mat - _perturbation(frame, pairs)
    )


def perturbed_forward(
    frame: WoldFrame, pairs: Sequence[tuple[WoldVector, WoldVector]]
) -> OperatorMatrix:
    """`T_Φ - Σ Vᵢ ⊗ Uᵢ`, leaky at the top block."""
    base = toeplitz_forward(frame)
    return OperatorMatrix(
        frame,
        frame,
        base.mat - _perturbation(frame, pairs),
        "truncation-leaky",
    )


def c0_decay(
    T: OperatorMatrix, M: Subspace, h: WoldVector, nmax: int
) -> list[float]:
    """Norms `‖((T·P_M)ᴴ)ⁿ h‖` for `n = 1..nmax`.

    Raises:
        FrameMismatchError: If `T`, `M` and `h` do not share a frame.
        ValueError: If `nmax` is below one.
    """
    if nmax < 1:
        msg = f"nmax must be positive, got {nmax}."
        raise ValueError(msg)
    if not (T.frame_in == T.frame_out == M.frame == h.frame):
        raise FrameMismatchError(T.describe(), M.frame.descriptor())

    adjoint = T.mat.conj().T
    current = h.coords
    norms: list[float] = []
    for _ in range(nmax):
        current = M.project_coords(adjoint @ current)
        norms.append(float(np.linalg.norm(current)))
    return norms


def settling_step(norms: Sequence[float], level: float) -> int | None:
    """First step (counted from one) whose norm is at most `level`."""
    return next((n for n, v in enumerate(norms, 1) if v <= level), None)
