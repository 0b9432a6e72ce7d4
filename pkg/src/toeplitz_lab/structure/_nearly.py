"""Nearly invariant subspaces of the backward block shift.

`M` is nearly invariant for the pair `(B, B′)` when `T*_B` maps
`Y = M ∩ T_{B′}H²` into `M`, and nearly invariant with finite defect when it
maps `Y` into `M ⊕ F` for a finite-dimensional `F`. Both structure theorems
rest on the wandering part `W = M ⊖ Y`.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np

from toeplitz_lab._exceptions import ConvergenceError
from toeplitz_lab._exceptions import FrameMismatchError
from toeplitz_lab._exceptions import HypothesisError
from toeplitz_lab._exceptions import LabError
from toeplitz_lab._hardy import split_fibers
from toeplitz_lab._linspace import Subspace
from toeplitz_lab._linspace import intersect
from toeplitz_lab._linspace import ominus
from toeplitz_lab._toeplitz import range_in_frame
from toeplitz_lab._utility import spectral_norm
from toeplitz_lab.constants import ACCEPTANCE_TOL
from toeplitz_lab.constants import CONSTRUCTION_TOL
from toeplitz_lab.constants import INTERSECTION_EPS
from toeplitz_lab.constants import MAX_ITERATIONS
from toeplitz_lab.constants import RANK_TOL

from ._invariant import decompose_wandering
from ._model import assemble_coords
from ._model import backward_residual
from ._model import check_vectors
from ._model import defect_space
from ._model import isometry_residual
from ._model import model_image
from ._model import model_support_residual
from ._model import orthonormality_residual
from ._model import synthesize
from ._results import CheckReport
from ._results import DefectDecomposition
from ._results import DefectReport
from ._results import ElementDecomposition
from ._results import NearlyResult
from ._results import WanderingBound
from ._results import stack
from ._results import unstack

if TYPE_CHECKING:
    from collections.abc import Sequence

    from toeplitz_lab._blaschke import BlaschkeProduct
    from toeplitz_lab._hardy import WoldFrame
    from toeplitz_lab._hardy import WoldVector
    from toeplitz_lab._types import ComplexArray

log = logging.getLogger(__name__)


def _split_wandering(
    M: Subspace, Bp: BlaschkeProduct, eps: float = INTERSECTION_EPS
) -> tuple[Subspace, Subspace]:
    """`Y = M ∩ T_{B′}H²` and `W = M ⊖ Y` inside the frame of `M`."""
    Y = intersect(M, range_in_frame(Bp, M.frame), eps)
    return Y, ominus(M, Y, eps)


def _check_symbols(
    frame: WoldFrame, B: BlaschkeProduct, Bp: BlaschkeProduct
) -> None:
    if B != frame.blaschke:
        raise FrameMismatchError(B.to_json(), frame.blaschke.to_json())
    if not B.divides(Bp):
        raise HypothesisError(
            "divisibility", detail=f"{B.zeros} does not divide {Bp.zeros}"
        )
    if not B.vanishes_at_origin:
        raise HypothesisError("vanishing at zero")


def _outgoing(M: Subspace, Y: Subspace) -> tuple[ComplexArray, float]:
    """`(I - P_M)·T*_B·Q_Y` and `‖T*_B·Q_Y‖`."""
    image = M.frame.shift_back(Y.onb)
    return image - M.project_coords(image), spectral_norm(image)


def wandering_bound_lemma39(
    M: Subspace, Bp: BlaschkeProduct, tol: float = INTERSECTION_EPS
) -> WanderingBound:
    """Dimension of `M ⊖ (M ∩ T_{B′}H²)` next to the bound `deg B′ · m`.

    Args:
        M: The subspace.
        Bp: The product `B′`.
        tol: Principal angle threshold of the intersection.

    Raises:
        SymbolDegreeError: If the frame cannot hold the model space of `Bp`.

    Returns:
        The dimension and its bound.
    """
    _, W = _split_wandering(M, Bp, tol)
    bound = WanderingBound(W.dim, Bp.degree * M.frame.fiber)
    log.debug("Wandering dimension %d, bound %d.", bound.dim, bound.bound)
    return bound


def nearly_check(
    M: Subspace,
    B: BlaschkeProduct,
    Bp: BlaschkeProduct,
    tol: float = ACCEPTANCE_TOL,
) -> tuple[bool, float]:
    """Whether `T*_B(M ∩ T_{B′}H²) ⊆ M` within `tol`.

    Raises:
        FrameMismatchError: If the frame of `M` is not built on `B`.

    Returns:
        The verdict and `‖(I - P_M)·T*_B·P_{M ∩ T_{B′}H²}‖`.
    """
    if B != M.frame.blaschke:
        raise FrameMismatchError(B.to_json(), M.frame.blaschke.to_json())
    Y, _ = _split_wandering(M, Bp)
    outgoing, _ = _outgoing(M, Y)
    residual = spectral_norm(outgoing)
    return residual <= tol, residual


def nearly_decompose_thm313(
    M: Subspace,
    B: BlaschkeProduct,
    Bp: BlaschkeProduct,
    tol: float = ACCEPTANCE_TOL,
) -> NearlyResult:
    """Write a nearly `T*_B`-invariant subspace as `M = G·Nsub`.

    `G` is an orthonormal basis of `W = M ⊖ (M ∩ T_{B′}H²)`. `M` is then
    invariant under `T*_B - Σ T*_B Gᵢ ⊗ Gᵢ`, and the invariant
    decomposition has a vanishing `H` part since `M ∩ T_{B′}H² ⊆ BH²`.

    Raises:
        HypothesisError: Named `divisibility`, `vanishing at zero` or
            `nearly invariance`.

    Returns:
        `p`, `G`, the `T*_B ⊗ I_p`-invariant `Nsub` and the residuals.
    """
    frame = M.frame
    _check_symbols(frame, B, Bp)
    Y, W = _split_wandering(M, Bp)
    outgoing, _ = _outgoing(M, Y)
    residual = spectral_norm(outgoing)
    if residual > tol:
        raise HypothesisError("nearly invariance", residual)

    G = W.onb
    p = G.shape[1]
    decomposition = decompose_wandering(M, G)
    model_frame = decomposition.K.frame
    coords = np.zeros(
        (model_frame.dim, len(decomposition.per_element)),
        dtype=np.complex128,
    )
    for idx, element in enumerate(decomposition.per_element):
        coords[:, idx] = element.coords
    r_part, _ = split_fibers(model_frame, coords, [p, frame.fiber])
    Nsub = Subspace.from_columns(model_frame.with_fiber(p), r_part, RANK_TOL)

    G_vectors = decomposition.G
    image = model_image(frame, G_vectors, Nsub, ())
    unitary = isometry_residual(image, M)
    h_part = max(
        (
            float(np.linalg.norm(e.tail_blocks))
            for e in decomposition.per_element
        ),
        default=0.0,
    )
    checks = decomposition.checks | {
        "h_part": h_part,
        "nsub_invariance": backward_residual(Nsub),
        "nearly_invariance": residual,
        "nsub_isometry": unitary,
    }
    log.debug("Nearly invariant decomposition with p=%d.", p)
    return NearlyResult(p, G_vectors, Nsub, unitary, checks, decomposition)


def nearly_defect(
    M: Subspace,
    B: BlaschkeProduct,
    Bp: BlaschkeProduct,
    rank_tol: float = RANK_TOL,
) -> DefectReport:
    """Smallest `F` with `T*_B(M ∩ T_{B′}H²) ⊆ M ⊕ F`.

    `F` is the range of `(I - P_M)·T*_B·P_{M ∩ T_{B′}H²}`, basis ordered by
    decreasing singular value.

    Raises:
        FrameMismatchError: If the frame of `M` is not built on `B`.
    """
    frame = M.frame
    if B != frame.blaschke:
        raise FrameMismatchError(B.to_json(), frame.blaschke.to_json())
    Y, _ = _split_wandering(M, Bp)
    outgoing, scale = _outgoing(M, Y)
    basis, missed, sigma = defect_space(outgoing, scale, rank_tol)
    return DefectReport(
        basis.shape[1], tuple(unstack(frame, basis)), missed, sigma
    )


def _trace_defect(
    frame: WoldFrame,
    F: ComplexArray,
    G: ComplexArray,
    J: ComplexArray,
    M: Subspace,
    Y: Subspace,
) -> tuple[ComplexArray, ComplexArray, list[float], float, float]:
    """Run `Lₙ₊₁ = P₁·T*_B·P₂·Lₙ` from `L₀ = F`.

    `P₂` projects onto `Y` and `P₁` removes the defect directions `J`.

    Raises:
        ConvergenceError: If the iterates do not settle.

    Returns:
        Rows `Aₙ = GᴴLₙ`, rows `αₙ₊₁ = Jᴴ·T*_B·P₂·Lₙ`, the iterate norms, the
        largest block-0 mass of `P₂Lₙ` and the largest distance of an
        iterate from `M`.
    """
    size = float(np.linalg.norm(F))
    floor = CONSTRUCTION_TOL * size
    current = F
    a_rows: list[ComplexArray] = []
    alpha_rows: list[ComplexArray] = []
    norms = [size]
    divisibility = closure = 0.0
    while norms[-1] > floor:
        if len(a_rows) >= MAX_ITERATIONS:
            raise ConvergenceError(len(a_rows), norms[-1] / size)
        a_rows.append(G.conj().T @ current)
        y = Y.project_coords(current)
        divisibility = max(
            divisibility, float(np.linalg.norm(frame.as_blocks(y)[0]))
        )
        shifted = frame.shift_back(y)
        alpha = J.conj().T @ shifted
        alpha_rows.append(alpha)
        current = shifted - J @ alpha
        closure = max(closure, M.distance_coords(current))
        norms.append(float(np.linalg.norm(current)))

    count = len(a_rows)
    a_blocks = np.reshape(
        np.array(a_rows, dtype=np.complex128), (count, G.shape[1])
    )
    alphas = np.reshape(
        np.array(alpha_rows, dtype=np.complex128), (count, J.shape[1])
    )
    return a_blocks, alphas, norms, divisibility, closure


def nearly_defect_decompose(
    M: Subspace,
    B: BlaschkeProduct,
    Bp: BlaschkeProduct,
    tol: float = ACCEPTANCE_TOL,
) -> DefectDecomposition:
    """Decompose a nearly invariant subspace with finite defect.

    Every `F ∈ M` is written `F = G·R + B·Σ hᵢJᵢ` with `Jᵢ` an orthonormal
    basis of the defect space and `‖F‖² = ‖R‖² + Σ‖hᵢ‖²`. Case `i` applies
    when `M ⊄ T_{B′}H²`; in case `ii` there is no `G` and `F = B·Σ hᵢJᵢ`.

    Args:
        M: The subspace.
        B: Product of the frame, vanishing at zero.
        Bp: Product `B′` divisible by `B`.
        tol: Acceptance level, recorded with the checks.

    Raises:
        HypothesisError: Named `divisibility` or `vanishing at zero`.
        ConvergenceError: If a recursion does not settle.

    Returns:
        The case, `G`, `Js`, `K` over `ℂ^{p+n}` and the construction
        residuals.
    """
    frame = M.frame
    _check_symbols(frame, B, Bp)
    defect = nearly_defect(M, B, Bp)
    J = stack(list(defect.basis), frame)
    Y, W = _split_wandering(M, Bp)
    G = W.onb
    p, n = G.shape[1], J.shape[1]

    traces = [_trace_defect(frame, col, G, J, M, Y) for col in M.onb.T]
    steps = max([frame.blocks, *(len(t[0]) for t in traces)])
    model_frame = frame.with_fiber(p + n).with_blocks(steps)
    coords = np.zeros((model_frame.dim, len(traces)), dtype=np.complex128)
    for idx, (a, alphas, *_) in enumerate(traces):
        coords[:, idx] = assemble_coords(frame, steps, a, alphas, n)
    K = Subspace.from_columns(model_frame, coords, RANK_TOL)

    ext, images = synthesize(frame, G, model_frame, coords, J)
    residuals = np.linalg.norm(frame.resize(M.onb, ext) - images, axis=0)
    gaps = np.abs(1.0 - np.linalg.norm(coords, axis=0) ** 2)
    elements = tuple(
        ElementDecomposition(
            a, alphas, tuple(norms), coords[:, idx], float(res), float(gap)
        )
        for idx, ((a, alphas, norms, _, _), res, gap) in enumerate(
            zip(traces, residuals, gaps)
        )
    )
    G_vectors = tuple(unstack(frame, G))
    image = model_image(frame, G_vectors, K, defect.basis)
    checks = {
        "reconstruction": float(np.max(residuals, initial=0.0)),
        "norm_identity": float(np.max(gaps, initial=0.0)),
        "k_invariance": backward_residual(K),
        "model_support": model_support_residual(K, p + n),
        "termination": max(
            (t[2][-1] / t[2][0] for t in traces if t[2][0]), default=0.0
        ),
        "isometry": isometry_residual(image, M),
        "divisibility": max((t[3] for t in traces), default=0.0),
        "closure": max((t[4] for t in traces), default=0.0),
        "defect_residual": defect.residual,
    }
    case = "ii" if p == 0 else "i"
    log.debug(
        "Nearly invariant with defect %d: case %s, p=%d, %d steps.",
        n,
        case,
        p,
        steps,
    )
    return DefectDecomposition(
        case,
        frame,
        G_vectors,
        defect.basis,
        K,
        elements,
        checks,
        defect,
    )


def nearly_defect_converse(
    G: Sequence[WoldVector],
    K: Subspace,
    Js: Sequence[WoldVector],
    B: BlaschkeProduct,
    Bp: BlaschkeProduct,
    tol: float = ACCEPTANCE_TOL,
    *,
    frame: WoldFrame | None = None,
) -> CheckReport:
    """Check that `M = {G·R + B·Σ hᵢJᵢ : (R, h) ∈ K}` is nearly invariant.

    The hypotheses are checked in order: `B | B′` with `B(0) = 0`, `G` and
    `Js` jointly orthonormal, `K` model-supported and shift invariant, the
    synthesis map isometric inside the frame, `Js ⟂ M` and `G` spanning
    `M ⊖ (M ∩ T_{B′}H²)`.

    Args:
        G: Wandering columns, empty in case `ii`.
        K: Model subspace over `ℂ^{p+n}`.
        Js: Defect functions.
        B: Product of the frame.
        Bp: Product `B′`.
        tol: Acceptance level.
        frame: Frame of `M`, required when `G` and `Js` are both empty.

    Raises:
        HypothesisError: Naming the first hypothesis that fails.
        LabError: If no frame can be determined.

    Returns:
        Report with `defect_closure`, the residual of `T*_B(M ∩ T_{B′}H²)`
        outside `M ⊕ span{Jᵢ}`, and the flag `defect_bounded`.
    """
    vectors = [*G, *Js]
    if frame is None:
        if not vectors:
            msg = "A frame is required when G and Js are both empty."
            raise LabError(msg)
        frame = vectors[0].frame
    check_vectors(frame, vectors)
    _check_symbols(frame, B, Bp)
    p, n = len(G), len(Js)

    columns = stack(vectors, frame)
    orthonormal = orthonormality_residual(columns)
    if orthonormal > tol:
        raise HypothesisError("orthonormality", orthonormal)

    support = model_support_residual(K, p + n)
    if support > tol:
        raise HypothesisError("model support", support)
    invariance = backward_residual(K)
    if invariance > tol:
        raise HypothesisError("shift invariance", invariance)

    image = model_image(frame, G, K, Js)
    if image.outside > tol:
        raise HypothesisError("frame containment", image.outside)
    isometry = image.gram_defect()
    if isometry > tol:
        raise HypothesisError("isometry", isometry)
    M = image.restrict()

    j_matrix = stack(list(Js), frame)
    overlap = spectral_norm(M.project_coords(j_matrix))
    if overlap > tol:
        raise HypothesisError("orthonormality", overlap, "J is not ⟂ M")

    Y, W = _split_wandering(M, Bp)
    g_matrix = stack(list(G), frame)
    position = spectral_norm(g_matrix - W.project_coords(g_matrix))
    if W.dim != p or position > tol:
        raise HypothesisError(
            "wandering position", position, f"dim W = {W.dim}, p = {p}"
        )

    outgoing, _ = _outgoing(M, Y)
    missed = outgoing - j_matrix @ (j_matrix.conj().T @ outgoing)
    closure = spectral_norm(missed)
    defect = nearly_defect(M, B, Bp)
    return CheckReport(
        "nearly_defect_converse",
        {"defect_closure": closure, "isometry": isometry},
        tol,
        flags={"defect_bounded": defect.defect <= n},
        details={
            "p": p,
            "n": n,
            "defect": defect.defect,
            "case": "ii" if p == 0 else "i",
        },
    )
