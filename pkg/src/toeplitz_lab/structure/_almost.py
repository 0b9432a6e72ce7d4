"""Almost invariant subspaces of the backward block shift."""

from __future__ import annotations

import dataclasses
import logging
from typing import TYPE_CHECKING

import numpy as np

from toeplitz_lab._exceptions import FrameMismatchError
from toeplitz_lab._hardy import WoldVector
from toeplitz_lab._linspace import invariance_residual
from toeplitz_lab._toeplitz import rank_one
from toeplitz_lab._toeplitz import toeplitz_adjoint
from toeplitz_lab._utility import spectral_norm
from toeplitz_lab.constants import ACCEPTANCE_TOL
from toeplitz_lab.constants import RANK_TOL

from ._invariant import check_thm36_converse
from ._invariant import decompose_thm32
from ._model import check_vectors
from ._model import defect_space
from ._results import CheckReport
from ._results import DefectReport
from ._results import unstack

if TYPE_CHECKING:
    from collections.abc import Sequence

    from toeplitz_lab._linspace import Subspace
    from toeplitz_lab._toeplitz import OperatorMatrix

    from ._results import DecompositionResult

log = logging.getLogger(__name__)


def almost_defect(
    T: OperatorMatrix, M: Subspace, rank_tol: float = RANK_TOL
) -> DefectReport:
    """Smallest `F` with `T(M) ⊆ M ⊕ F`.

    `F` is the range of `(I - P_M)·T·P_M`, cut at `rank_tol` relative to
    `max(1, ‖T·P_M‖)`.

    Args:
        T: Endomorphism of the frame of `M`.
        M: The subspace.
        rank_tol: Relative singular value cut.

    Returns:
        The defect with an orthonormal basis of `F`.
    """
    frame = M.frame
    if not T.frame_in == T.frame_out == frame:
        raise FrameMismatchError(frame.descriptor(), T.describe())
    image = T.mat @ M.onb
    outgoing = image - M.project_coords(image)
    basis, missed, sigma = defect_space(
        outgoing, spectral_norm(image), rank_tol
    )
    return DefectReport(
        basis.shape[1], tuple(unstack(frame, basis)), missed, sigma
    )


def almost_equiv_check(
    T: OperatorMatrix,
    M: Subspace,
    pairs: Sequence[tuple[WoldVector, WoldVector]],
    tol: float = ACCEPTANCE_TOL,
) -> CheckReport:
    """Test the three characterizations of a defect of at most `k`.

    With `k = len(pairs)`:

    - `a`: invariance of `M` under `T - Σ vᵢ ⊗ uᵢ` forces a defect `≤ k`.
    - `b`: with `fᵢ` an orthonormal basis of the computed defect space,
      `M` is invariant under `T - Σ fᵢ ⊗ T*fᵢ`.
    - `c`: zero defect is the same as invariance under `T`.

    Returns:
        Report with residual `b_residual` and the flags `a` and `c`.
    """
    frame = M.frame
    check_vectors(frame, [v for pair in pairs for v in pair])
    k = len(pairs)
    report = almost_defect(T, M)

    perturbed = T.mat.copy()
    for v, u in pairs:
        perturbed -= rank_one(v, u).mat
    a_invariant = invariance_residual(perturbed, M) <= tol

    adjoint = T.mat.conj().T
    corrected = T.mat.copy()
    for f in report.basis:
        corrected -= rank_one(f, WoldVector(frame, adjoint @ f.coords)).mat
    b_residual = invariance_residual(corrected, M)

    plain = invariance_residual(T.mat, M)
    c_holds = (report.defect == 0) == (plain <= tol)

    log.debug(
        "Defect %d against %d pairs, corrected residual %.3e.",
        report.defect,
        k,
        b_residual,
    )
    return CheckReport(
        "almost_equivalence",
        {"b_residual": b_residual, "defect_missed": report.residual},
        tol,
        flags={
            "a": not a_invariant or report.defect <= k,
            "c": c_holds,
        },
        details={
            "k": k,
            "defect": report.defect,
            "a_premise": a_invariant,
            "invariance_residual": plain,
        },
    )


def almost_decompose_thm310(
    M: Subspace,
    rank_tol: float = RANK_TOL,
    tol: float = ACCEPTANCE_TOL,
) -> DecompositionResult:
    """Decompose an almost `T*_Φ`-invariant subspace as `[G, I_m]K`.

    With `F₁…F_n` an orthonormal basis of the defect space, `M` is invariant
    under `T*_Φ - Σ Fᵢ ⊗ T_Φ Fᵢ`, and `p ≤ n`.

    Returns:
        The decomposition with its defect report attached.
    """
    frame = M.frame
    report = almost_defect(toeplitz_adjoint(frame), M, rank_tol)
    Vs = list(report.basis)
    Us = [WoldVector(frame, frame.shift_forward(f.coords)) for f in Vs]
    result = decompose_thm32(M, Us, Vs, tol)
    log.debug("Almost invariant: defect %d, p=%d.", report.defect, result.p)
    return dataclasses.replace(result, defect=report)


def almost_converse_thm310(
    G: Sequence[WoldVector],
    K: Subspace,
    M: Subspace,
    tol: float = ACCEPTANCE_TOL,
) -> CheckReport:
    """Check that `M = [G, I_m]K` is almost invariant with defect `≤ p`.

    Raises:
        HypothesisError: If `(G, K)` does not meet the hypotheses of the
            invariant converse.
    """
    residual = check_thm36_converse(G, K, M, tol)
    report = almost_defect(toeplitz_adjoint(M.frame), M)
    return CheckReport(
        "almost_converse",
        {"invariance": residual, "defect_missed": report.residual},
        tol,
        flags={"defect_bounded": report.defect <= len(G)},
        details={"p": len(G), "defect": report.defect},
    )
