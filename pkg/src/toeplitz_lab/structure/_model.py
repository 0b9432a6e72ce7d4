"""Synthesis map `(R, H) ↦ G·R + H` and shared residuals."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg as spla

from toeplitz_lab._exceptions import FrameMismatchError
from toeplitz_lab._exceptions import HypothesisError
from toeplitz_lab._hardy import WoldFrame
from toeplitz_lab._hardy import WoldVector
from toeplitz_lab._hardy import split_fibers
from toeplitz_lab._linspace import Subspace
from toeplitz_lab._utility import spectral_norm
from toeplitz_lab.constants import ACCEPTANCE_TOL
from toeplitz_lab.constants import RANK_TOL

from ._results import ModelImage
from ._results import stack

if TYPE_CHECKING:
    from collections.abc import Sequence

    from toeplitz_lab._types import ComplexArray

log = logging.getLogger(__name__)


def check_vectors(frame: WoldFrame, vectors: Sequence[WoldVector]) -> None:
    """Raise unless every vector lives on `frame`."""
    for v in vectors:
        if v.frame != frame:
            raise FrameMismatchError(frame.descriptor(), v.frame.descriptor())


def orthonormality_residual(matrix: ComplexArray) -> float:
    """`‖XᴴX - I‖`."""
    gram = matrix.conj().T @ matrix
    return spectral_norm(gram - np.eye(gram.shape[0]))


def backward_residual(S: Subspace) -> float:
    """`‖(I - P_S)·T*·P_S‖` for the block left shift of the frame of `S`."""
    onb = S.onb
    if onb.shape[1] == 0:
        return 0.0
    image = S.frame.shift_back(onb)
    return spectral_norm(image - S.project_coords(image))


def forward_residual(K: Subspace) -> float:
    """`‖P_K·T·P_{K^⊥}‖`, the forward invariance defect of `K^⊥`.

    With `T = T*ᴴ` on the frame this is `‖Yᴴ(I - QQᴴ)‖` for `Y = T*Q`.
    """
    onb = K.onb
    if onb.shape[1] == 0:
        return 0.0
    image = K.frame.shift_back(onb).conj().T
    return spectral_norm(image - (image @ onb) @ onb.conj().T)


def model_support_residual(K: Subspace, supported: int) -> float:
    """Norm of the leading `supported` fibers of `K` off model index zero."""
    frame = K.frame
    head, _ = split_fibers(frame, K.onb, [supported, frame.fiber - supported])
    return frame.with_fiber(supported).off_model_norm(head)


def assemble_coords(
    frame: WoldFrame,
    steps: int,
    a_blocks: ComplexArray,
    tail_blocks: ComplexArray,
    tail_fiber: int | None = None,
) -> ComplexArray:
    """Model coordinates of one element from its recursion output.

    `Aₙ` lands at block n, model index zero. With `tail_fiber` the tail rows
    are scalar coefficients placed the same way, otherwise they are whole
    `K_Φ` blocks over the fiber of `frame`.

    Args:
        frame: Frame of `M`.
        steps: Block count of the model frame.
        a_blocks: `s × p` coefficients.
        tail_blocks: `s × n` coefficients or `s × l·m` blocks.
        tail_fiber: Number of scalar tail functions.

    Returns:
        Flat coordinates in the concatenated model frame.
    """
    l, p = frame.model_dim, a_blocks.shape[1]
    count = a_blocks.shape[0]
    r = np.zeros((steps, l, p), dtype=np.complex128)
    r[:count, 0] = a_blocks
    if tail_fiber is None:
        fiber = frame.fiber
        tail = np.zeros((steps, l, fiber), dtype=np.complex128)
        tail[:count] = tail_blocks.reshape(count, l, fiber)
    else:
        fiber = tail_fiber
        tail = np.zeros((steps, l, fiber), dtype=np.complex128)
        tail[:count, 0] = tail_blocks
    return np.concatenate([r, tail], axis=2).ravel()


def _shifted_sum(
    frame: WoldFrame,
    columns: ComplexArray,
    blocks: ComplexArray,
    offset: int,
) -> ComplexArray:
    total = np.zeros((frame.dim, blocks.shape[-1]), dtype=np.complex128)
    for n, coeffs in enumerate(blocks):
        total += frame.shift_forward(columns @ coeffs, n + offset)
    return total


def synthesize(
    frame: WoldFrame,
    G: ComplexArray,
    model_frame: WoldFrame,
    coords: ComplexArray,
    Js: ComplexArray | None = None,
) -> tuple[WoldFrame, ComplexArray]:
    """Images of model coordinates in a frame with room for every shift.

    `R` and `h` are read at model index zero; `H` is taken as it stands.

    Args:
        frame: Frame of `M`.
        G: `dim × p` wandering columns.
        model_frame: Frame of the coordinates, fiber `p + m` or `p + n`.
        coords: `dim_model × c` model coordinates.
        Js: `dim × n` defect columns, or `None` for the `(R, H)` form.

    Returns:
        The extended frame and the `dim_ext × c` images.
    """
    p = G.shape[1]
    tail = frame.fiber if Js is None else Js.shape[1]
    if (
        model_frame.fiber != p + tail
        or model_frame.with_fiber(frame.fiber).with_blocks(frame.blocks)
        != frame
    ):
        raise FrameMismatchError(
            frame.with_fiber(p + tail).descriptor(), model_frame.descriptor()
        )

    ext = frame.with_blocks(frame.blocks + model_frame.blocks + 1)
    r_part, t_part = split_fibers(model_frame, coords, [p, tail])
    r_blocks = model_frame.with_fiber(p).as_blocks(r_part)[:, 0]
    images = _shifted_sum(ext, frame.resize(G, ext), r_blocks, 0)
    if Js is None:
        images += model_frame.with_fiber(tail).resize(t_part, ext)
    else:
        t_blocks = model_frame.with_fiber(tail).as_blocks(t_part)[:, 0]
        images += _shifted_sum(ext, frame.resize(Js, ext), t_blocks, 1)
    return ext, images


def model_image(
    frame: WoldFrame,
    G: Sequence[WoldVector],
    K: Subspace,
    Js: Sequence[WoldVector] | None = None,
) -> ModelImage:
    """Push an orthonormal basis of `K` through the synthesis map.

    Without `Js` the map is `(R, H) ↦ G·R + H`; with `Js` it is
    `(R, h) ↦ G·R + B·Σ hᵢJᵢ`, and an empty `Js` gives `R ↦ G·R`.

    Raises:
        FrameMismatchError: If the fiber of `K` does not fit `G` and the
            tail, or the vectors live on another frame.
    """
    check_vectors(frame, [*G, *(Js or ())])
    j_matrix = None if Js is None else stack(Js, frame)
    ext, images = synthesize(frame, stack(G, frame), K.frame, K.onb, j_matrix)
    beyond = np.abs(ext.as_blocks(images)[frame.blocks :]) ** 2
    mass = np.sqrt(np.sum(beyond, axis=(0, 1, 2)))
    outside = float(np.max(mass, initial=0.0))
    return ModelImage(frame, ext, images, outside)


def rebuild_from_model(
    G: Sequence[WoldVector],
    Nsub: Subspace,
    frame: WoldFrame,
    tol: float = ACCEPTANCE_TOL,
) -> Subspace:
    """`M = G·Nsub` as a subspace of `frame`.

    Raises:
        HypothesisError: If the images leave the frame by more than `tol`.
    """
    image = model_image(frame, G, Nsub, ())
    if image.outside > tol:
        raise HypothesisError("frame containment", image.outside)
    return image.restrict()


def isometry_residual(image: ModelImage, M: Subspace) -> float:
    """How far the synthesis map is from a unitary of `K` onto `M`.

    Combines the Gram defect of the images, their distance from `M` and a
    unit penalty when the dimensions disagree.
    """
    inside = image.in_base()
    leak = spectral_norm(inside - M.project_coords(inside))
    rank = 0.0 if image.columns.shape[1] == M.dim else 1.0
    return max(image.gram_defect(), leak, rank)


def defect_space(
    outgoing: ComplexArray, scale: float, rank_tol: float = RANK_TOL
) -> tuple[ComplexArray, float, tuple[float, ...]]:
    """Orthonormal range of an outgoing block by singular value cut.

    Returns:
        The kept left singular vectors, the norm of what they miss and all
        singular values in decreasing order.
    """
    dim, width = outgoing.shape
    if width == 0 or dim == 0:
        return np.zeros((dim, 0), dtype=np.complex128), 0.0, ()
    u, sigma, _ = spla.svd(outgoing, full_matrices=False)
    keep = sigma > rank_tol * max(scale, 1.0)
    basis = np.asarray(u[:, keep], dtype=np.complex128)
    missed = outgoing - basis @ (basis.conj().T @ outgoing)
    log.debug("Defect rank %d of %d directions.", basis.shape[1], width)
    return basis, spectral_norm(missed), tuple(float(s) for s in sigma)
