"""Numerical subspace algebra over a Wold frame."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING
from typing import Any

import numpy as np
import scipy.linalg as spla

from ._exceptions import FrameMismatchError
from ._hardy import WoldFrame
from ._hardy import WoldVector
from ._utility import array_to_pairs
from ._utility import pairs_to_array
from ._utility import spectral_norm
from .constants import INTERSECTION_EPS
from .constants import RANK_TOL

if TYPE_CHECKING:
    from collections.abc import Sequence

    from ._toeplitz import OperatorMatrix
    from ._types import ComplexArray
    from ._types import FloatArray

log = logging.getLogger(__name__)


def extend_basis(
    basis: ComplexArray,
    candidates: ComplexArray,
    rank_tol: float,
    scale: float | None = None,
) -> ComplexArray:
    """Orthonormalize `candidates` against `basis` and each other.

    Modified Gram–Schmidt with one re-orthogonalization pass. A candidate is
    dropped when its residual falls below `rank_tol · scale`, where `scale`
    defaults to the largest candidate norm. Input order is respected.

    Args:
        basis: `dim × k` matrix with orthonormal columns.
        candidates: `dim × c` matrix of new directions.
        rank_tol: Relative rank tolerance.
        scale: Reference norm for the tolerance.

    Returns:
        The accepted new orthonormal columns, `dim × r`.
    """
    dim, count = candidates.shape
    if scale is None:
        scale = float(np.max(np.linalg.norm(candidates, axis=0), initial=0))
    accepted = np.zeros((dim, min(count, dim)), dtype=np.complex128)
    if scale == 0:
        return accepted[:, :0]

    k = 0
    for column in candidates.T:
        residual = column.astype(np.complex128, copy=True)
        for _ in range(2):
            if basis.shape[1]:
                residual -= basis @ (basis.conj().T @ residual)
            if k:
                residual -= accepted[:, :k] @ (
                    accepted[:, :k].conj().T @ residual
                )
        size = np.linalg.norm(residual)
        if size <= rank_tol * scale:
            continue
        accepted[:, k] = residual / size
        k += 1
        if basis.shape[1] + k == dim:
            break
    return accepted[:, :k]


@dataclass(frozen=True, eq=False)
class Subspace:
    """Orthonormally represented subspace of a frame.

    A complemented subspace is the orthocomplement of the span of `basis`;
    its own orthonormal basis is only materialized when `onb` is read.

    Params:
        frame: The ambient frame.
        basis: `dim × k` matrix with orthonormal columns.
        rank_tol: Tolerance used at construction.
        complemented: Whether the subspace is the complement of `basis`.
    """

    frame: WoldFrame
    basis: ComplexArray
    rank_tol: float = RANK_TOL
    complemented: bool = False

    @classmethod
    def zero(cls, frame: WoldFrame) -> Subspace:
        """The zero subspace."""
        return cls(frame, np.zeros((frame.dim, 0), dtype=np.complex128))

    @classmethod
    def full(cls, frame: WoldFrame) -> Subspace:
        """The whole frame."""
        return complement(cls.zero(frame))

    @classmethod
    def from_columns(
        cls,
        frame: WoldFrame,
        columns: ComplexArray,
        rank_tol: float = RANK_TOL,
    ) -> Subspace:
        """Span of the columns of a coordinate matrix."""
        columns = np.asarray(columns, dtype=np.complex128)
        if columns.ndim == 1:
            columns = columns.reshape(-1, 1)
        if columns.shape[0] != frame.dim:
            raise FrameMismatchError(frame.dim, columns.shape[0])
        empty = np.zeros((frame.dim, 0), dtype=np.complex128)
        return cls(frame, extend_basis(empty, columns, rank_tol), rank_tol)

    @property
    def dim(self) -> int:
        """Dimension of the subspace."""
        k = int(self.basis.shape[1])
        return self.frame.dim - k if self.complemented else k

    @cached_property
    def onb(self) -> ComplexArray:
        """Orthonormal basis of the subspace itself."""
        if not self.complemented:
            return self.basis
        if self.basis.shape[1] == 0:
            return np.eye(self.frame.dim, dtype=np.complex128)
        if self.dim == 0:
            return np.zeros((self.frame.dim, 0), dtype=np.complex128)
        return np.asarray(
            spla.null_space(self.basis.conj().T), dtype=np.complex128
        )

    def project_coords(self, coords: ComplexArray) -> ComplexArray:
        """Orthogonal projection of a coordinate vector or matrix."""
        if self.basis.shape[1] == 0:
            return coords.copy() if self.complemented else coords * 0
        inside = self.basis @ (self.basis.conj().T @ coords)
        return coords - inside if self.complemented else inside

    def distance_coords(self, coords: ComplexArray) -> float:
        """Norm of the part of `coords` outside the subspace."""
        return float(np.linalg.norm(coords - self.project_coords(coords)))

    def contains(self, v: WoldVector, tol: float) -> bool:
        """Whether `v` lies in the subspace up to `tol` relative."""
        self._check(v.frame)
        return self.distance_coords(v.coords) <= tol * max(v.norm(), 1.0)

    def vectors(self) -> list[WoldVector]:
        """Orthonormal basis as frame vectors."""
        return [WoldVector(self.frame, col) for col in self.onb.T]

    def projector(self) -> ComplexArray:
        """Dense projection matrix."""
        return self.project_coords(
            np.eye(self.frame.dim, dtype=np.complex128)
        )

    def _check(self, frame: WoldFrame) -> None:
        if frame != self.frame:
            raise FrameMismatchError(
                self.frame.descriptor(), frame.descriptor()
            )

    def embed(self, frame: WoldFrame) -> Subspace:
        """Carry the subspace into a frame with another block count."""
        onb = self.frame.resize(self.onb, frame)
        return Subspace.from_columns(frame, onb, self.rank_tol)

    def to_json(self) -> dict[str, Any]:
        """Frame descriptor, basis as `[re, im]` pairs and rank tolerance."""
        return {
            "frame": self.frame.descriptor(),
            "onb": array_to_pairs(self.onb),
            "rank_tol": self.rank_tol,
        }

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> Subspace:
        """Inverse of [to_json][toeplitz_lab.linspace.Subspace.to_json].

        The basis is re-orthonormalized so edited files cannot smuggle in a
        non-orthonormal basis.
        """
        frame = WoldFrame.from_descriptor(payload["frame"])
        columns = pairs_to_array(payload["onb"])
        return cls.from_columns(
            frame, columns, float(payload.get("rank_tol", RANK_TOL))
        )


def _common_frame(vectors: Sequence[WoldVector]) -> WoldFrame:
    frame = vectors[0].frame
    for v in vectors[1:]:
        if v.frame != frame:
            raise FrameMismatchError(frame.descriptor(), v.frame.descriptor())
    return frame


def _check_pair(S1: Subspace, S2: Subspace) -> None:
    if S1.frame != S2.frame:
        raise FrameMismatchError(S1.frame.descriptor(), S2.frame.descriptor())


def orthonormalize(
    vectors: Sequence[WoldVector],
    rank_tol: float = RANK_TOL,
    *,
    frame: WoldFrame | None = None,
) -> Subspace:
    """Orthonormal basis of the span of `vectors`.

    Args:
        vectors: Vectors on a common frame, processed in order.
        rank_tol: Residuals below `rank_tol` times the largest input norm
            are treated as dependent.
        frame: Frame to use when `vectors` is empty.

    Raises:
        FrameMismatchError: If the vectors live on different frames.
        ValueError: If no vectors and no frame are given.

    Returns:
        The spanned subspace.
    """
    if not vectors:
        if frame is None:
            msg = "An empty vector list needs an explicit frame."
            raise ValueError(msg)
        return Subspace.zero(frame)
    common = _common_frame(vectors)
    if frame is not None and frame != common:
        raise FrameMismatchError(frame.descriptor(), common.descriptor())
    columns = np.column_stack([v.coords for v in vectors])
    return Subspace.from_columns(common, columns, rank_tol)


def project(S: Subspace, v: WoldVector) -> WoldVector:
    """Orthogonal projection of `v` onto `S`."""
    S._check(v.frame)
    return WoldVector(S.frame, S.project_coords(v.coords))


def complement(S: Subspace) -> Subspace:
    """Orthocomplement of `S` inside its frame."""
    return Subspace(S.frame, S.basis, S.rank_tol, not S.complemented)


def _null_directions(
    block: ComplexArray, width: int, eps: float
) -> ComplexArray:
    """Right vectors `y` with `‖block·y‖` inside the angle threshold."""
    if block.shape[0] == 0:
        return np.eye(width, dtype=np.complex128)
    _, sigma, vh = spla.svd(block, full_matrices=True)
    threshold = np.sqrt(max(2 * eps - eps**2, 0.0))
    keep = np.ones(width, dtype=bool)
    keep[: sigma.size] = sigma <= threshold
    return np.asarray(vh.conj().T[:, keep], dtype=np.complex128)


def intersect(
    S1: Subspace, S2: Subspace, eps: float = INTERSECTION_EPS
) -> Subspace:
    """Intersection by principal angles.

    Directions whose principal angle has cosine at least `1 - eps` are
    shared. With a complemented operand the same rule is applied through
    the null space of the stored basis, returned on the explicit side.

    Raises:
        FrameMismatchError: If the frames differ.
    """
    _check_pair(S1, S2)
    frame = S1.frame
    rank_tol = min(S1.rank_tol, S2.rank_tol)

    if S1.complemented and S2.complemented:
        union = np.hstack([S1.basis, S2.basis])
        return complement(Subspace.from_columns(frame, union, rank_tol))
    if S1.complemented:
        S1, S2 = S2, S1
    if S1.dim == 0 or S2.dim == 0:
        return Subspace.zero(frame)

    if S2.complemented:
        block = S2.basis.conj().T @ S1.basis
        directions = _null_directions(block, S1.dim, eps)
        return Subspace.from_columns(frame, S1.basis @ directions, rank_tol)

    u, sigma, _ = spla.svd(S1.basis.conj().T @ S2.basis)
    keep = sigma >= 1 - eps
    return Subspace.from_columns(
        frame, S1.basis @ u[:, : sigma.size][:, keep], rank_tol
    )


def ominus(M: Subspace, S: Subspace, eps: float = INTERSECTION_EPS) -> Subspace:
    """`M ∩ S^⊥`, the orthogonal difference when `S ⊆ M`."""
    return intersect(M, complement(S), eps)


def principal_angles(S1: Subspace, S2: Subspace) -> FloatArray:
    """Principal angles in ascending order.

    Raises:
        FrameMismatchError: If the frames differ.
    """
    _check_pair(S1, S2)
    if S1.dim == 0 or S2.dim == 0:
        return np.zeros(0, dtype=np.float64)
    cosines = spla.svdvals(S1.onb.conj().T @ S2.onb)
    return np.asarray(np.arccos(np.clip(cosines, 0.0, 1.0)), np.float64)


def krylov_closure(
    ops: Sequence[OperatorMatrix],
    seeds: Sequence[WoldVector],
    rank_tol: float = RANK_TOL,
    *,
    frame: WoldFrame | None = None,
) -> Subspace:
    """Smallest subspace containing `seeds` and invariant under `ops`.

    Only the directions added in the previous round are pushed through the
    operators again, so the loop runs at most `dim` rounds.

    Raises:
        FrameMismatchError: If an operator is not an endomorphism of the
            seeds' frame.
    """
    closure = orthonormalize(seeds, rank_tol, frame=frame)
    frame = closure.frame
    for op in ops:
        if op.frame_in != frame or op.frame_out != frame:
            raise FrameMismatchError(frame.descriptor(), op.describe())

    basis = closure.basis
    frontier = basis
    rounds = 0
    while frontier.shape[1] and ops:
        images = np.hstack([op.mat @ frontier for op in ops])
        scale = max(1.0, float(np.max(np.linalg.norm(images, axis=0))))
        frontier = extend_basis(basis, images, rank_tol, scale)
        basis = np.hstack([basis, frontier])
        rounds += 1

    log.debug(
        "Krylov closure of rank %d after %d rounds.", basis.shape[1], rounds
    )
    return Subspace(frame, basis, rank_tol)


def invariance_residual(matrix: ComplexArray, S: Subspace) -> float:
    """`‖(I - P_S)·A·P_S‖` for an endomorphism matrix `A`."""
    onb = S.onb
    if onb.shape[1] == 0:
        return 0.0
    image = matrix @ onb
    return spectral_norm(image - S.project_coords(image))
