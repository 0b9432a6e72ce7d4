"""Invariant subspaces of finite-rank perturbations of the block shifts."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg as spla

from toeplitz_lab._exceptions import ConvergenceError
from toeplitz_lab._exceptions import FrameMismatchError
from toeplitz_lab._exceptions import HypothesisError
from toeplitz_lab._exceptions import LabError
from toeplitz_lab._exceptions import NotInvariantError
from toeplitz_lab._hardy import WoldVector
from toeplitz_lab._hardy import join_fibers
from toeplitz_lab._hardy import split_fibers
from toeplitz_lab._linspace import Subspace
from toeplitz_lab._linspace import complement
from toeplitz_lab._linspace import extend_basis
from toeplitz_lab._linspace import invariance_residual
from toeplitz_lab._toeplitz import column_multiplier
from toeplitz_lab._toeplitz import perturbed_backward
from toeplitz_lab._toeplitz import perturbed_forward
from toeplitz_lab._utility import spectral_norm
from toeplitz_lab.constants import ACCEPTANCE_TOL
from toeplitz_lab.constants import CONSTRUCTION_TOL
from toeplitz_lab.constants import DEFAULT_GUARD
from toeplitz_lab.constants import MAX_ITERATIONS
from toeplitz_lab.constants import RANK_TOL

from ._model import assemble_coords
from ._model import backward_residual
from ._model import check_vectors
from ._model import forward_residual
from ._model import isometry_residual
from ._model import model_image
from ._model import model_support_residual
from ._model import orthonormality_residual
from ._model import synthesize
from ._results import CheckReport
from ._results import DecompositionResult
from ._results import ElementDecomposition
from ._results import ForwardResult
from ._results import Representation
from ._results import stack
from ._results import unstack

if TYPE_CHECKING:
    from collections.abc import Callable
    from collections.abc import Sequence

    from toeplitz_lab._hardy import WoldFrame
    from toeplitz_lab._types import ComplexArray

log = logging.getLogger(__name__)

_PIN_OFFSET = 1e-3


def wandering_columns(
    M: Subspace, Us: Sequence[WoldVector], rank_tol: float = RANK_TOL
) -> ComplexArray:
    """Orthonormal basis of `span{P_M Uᵢ}` in input order.

    Projections smaller than `rank_tol` relative to the largest `‖Uᵢ‖` count
    as zero.
    """
    frame = M.frame
    empty = np.zeros((frame.dim, 0), dtype=np.complex128)
    if not Us:
        return empty
    raw = stack(Us, frame)
    scale = float(np.max(np.linalg.norm(raw, axis=0)))
    return extend_basis(empty, M.project_coords(raw), rank_tol, scale)


def trace_element(
    frame: WoldFrame,
    F: ComplexArray,
    G: ComplexArray,
    rest: Callable[[ComplexArray], ComplexArray],
) -> tuple[ComplexArray, ComplexArray, list[float]]:
    """Run `Lₙ₊₁ = T*·P_{M⊖W}·Lₙ` from `L₀ = F`.

    Stops once `‖Lₙ‖` falls to the construction tolerance relative to `‖F‖`.

    Args:
        frame: Frame of `M`.
        F: Coordinates of the starting element.
        G: `dim × p` orthonormal basis of `W`.
        rest: The projection onto `M ⊖ W`.

    Raises:
        ConvergenceError: If the iterates do not settle within
            `MAX_ITERATIONS` steps.

    Returns:
        The `Aₙ` rows, the block-0 rows of `P_{M⊖W}Lₙ` and the iterate norms.
    """
    size = float(np.linalg.norm(F))
    floor = CONSTRUCTION_TOL * size
    current = F
    a_blocks: list[ComplexArray] = []
    h_blocks: list[ComplexArray] = []
    norms = [size]
    while norms[-1] > floor:
        if len(a_blocks) >= MAX_ITERATIONS:
            raise ConvergenceError(len(a_blocks), norms[-1] / size)
        a_blocks.append(G.conj().T @ current)
        following = rest(current)
        h_blocks.append(frame.as_blocks(following)[0].ravel())
        current = frame.shift_back(following)
        norms.append(float(np.linalg.norm(current)))

    count, p = len(a_blocks), G.shape[1]
    return (
        np.reshape(np.array(a_blocks, dtype=np.complex128), (count, p)),
        np.reshape(
            np.array(h_blocks, dtype=np.complex128), (count, frame.block_dim)
        ),
        norms,
    )


def decompose_wandering(
    M: Subspace, G: ComplexArray
) -> DecompositionResult:
    """Build `K` for a known wandering basis `G ⊆ M`.

    Callers are responsible for the invariance of `M ⊖ span G` under the
    backward shift up to `span G`.
    """
    frame = M.frame
    onb = M.onb
    p = G.shape[1]

    def rest(x: ComplexArray) -> ComplexArray:
        return M.project_coords(x) - G @ (G.conj().T @ x)

    traces = [trace_element(frame, col, G, rest) for col in onb.T]
    steps = max([frame.blocks, *(len(a) for a, _, _ in traces)])
    model_frame = frame.with_fiber(p + frame.fiber).with_blocks(steps)
    coords = np.zeros((model_frame.dim, len(traces)), dtype=np.complex128)
    for idx, (a, h, _) in enumerate(traces):
        coords[:, idx] = assemble_coords(frame, steps, a, h)
    K = Subspace.from_columns(model_frame, coords, RANK_TOL)

    ext, images = synthesize(frame, G, model_frame, coords)
    residuals = np.linalg.norm(frame.resize(onb, ext) - images, axis=0)
    gaps = np.abs(
        np.linalg.norm(onb, axis=0) ** 2 - np.linalg.norm(coords, axis=0) ** 2
    )
    elements = tuple(
        ElementDecomposition(
            a, h, tuple(norms), coords[:, idx], float(res), float(gap)
        )
        for idx, ((a, h, norms), res, gap) in enumerate(
            zip(traces, residuals, gaps)
        )
    )
    G_vectors = tuple(unstack(frame, G))
    image = model_image(frame, G_vectors, K)
    checks = {
        "reconstruction": float(np.max(residuals, initial=0.0)),
        "parseval": float(np.max(gaps, initial=0.0)),
        "k_invariance": backward_residual(K),
        "model_support": model_support_residual(K, p),
        "termination": max(
            (n[-1] / n[0] for _, _, n in traces if n[0]), default=0.0
        ),
        "isometry": isometry_residual(image, M),
        "frame_containment": image.outside,
    }
    log.debug(
        "Decomposed subspace of dimension %d: p=%d, %d steps.",
        M.dim,
        p,
        steps,
    )
    return DecompositionResult(frame, G_vectors, K, elements, checks)


def decompose_thm32(
    M: Subspace,
    Us: Sequence[WoldVector],
    Vs: Sequence[WoldVector],
    tol: float = ACCEPTANCE_TOL,
) -> DecompositionResult:
    """Decompose `M` invariant under `T*_Φ - Σ Vᵢ ⊗ Uᵢ` as `[G, I_m]K`.

    `G` is an orthonormal basis of `span{P_M Uᵢ}`. For every orthonormal
    basis element `F` of `M` the recursion `Lₙ₊₁ = T*_Φ P_{M⊖W} Lₙ` yields
    `Aₙ = GᴴLₙ` and the `K_Φ` blocks of `P_{M⊖W}Lₙ`; `K` is the span of the
    resulting pairs `(R, H)`.

    Args:
        M: Subspace of a frame built on a product vanishing at zero.
        Us: Left factors of the perturbation.
        Vs: Right factors of the perturbation.
        tol: Acceptance level of the invariance precondition.

    Raises:
        NotInvariantError: If the invariance residual exceeds `tol`.
        FrameMismatchError: If a vector lives on another frame.
        LabError: If `Us` and `Vs` differ in length.

    Returns:
        The decomposition and its construction residuals.
    """
    frame = M.frame
    if len(Us) != len(Vs):
        msg = f"Got {len(Us)} left and {len(Vs)} right perturbation factors."
        raise LabError(msg)
    check_vectors(frame, [*Us, *Vs])

    operator = perturbed_backward(frame, list(zip(Vs, Us)))
    residual = invariance_residual(operator.mat, M)
    if residual > tol:
        raise NotInvariantError(residual, tol)

    return decompose_wandering(M, wandering_columns(M, Us))


def _canonical_inputs(
    representation: DecompositionResult | Representation, M: Subspace
) -> tuple[Representation, ComplexArray, ComplexArray | None]:
    if isinstance(representation, DecompositionResult):
        model = representation.representation()
        coords = np.zeros(
            (model.K.frame.dim, len(representation.per_element)),
            dtype=np.complex128,
        )
        for idx, element in enumerate(representation.per_element):
            coords[:, idx] = element.coords
        return model, coords, M.onb
    return representation, representation.K.onb, None


def _rotation_residual(
    M: Subspace,
    G: ComplexArray,
    model_frame: WoldFrame,
    coords: ComplexArray,
    *,
    per_element: bool,
) -> float:
    """Distance between the stored pairs and a rerun on `G·Q`.

    With `per_element` the columns of `coords` are the pairs of the basis of
    `M` and are compared one by one, otherwise against the rerun `K`.
    """
    if not coords.shape[1]:
        return 0.0
    frame = M.frame
    p, m = G.shape[1], frame.fiber
    Q = spla.dft(p, scale="sqrtn") if p else np.zeros((0, 0), np.complex128)
    rebuilt = decompose_wandering(M, G @ Q)

    r_part, h_part = split_fibers(model_frame, coords, [p, m])
    r_frame = model_frame.with_fiber(p)
    rows = np.einsum("qs,nlqc->nlsc", Q.conj(), r_frame.as_blocks(r_part))
    expected = join_fibers(
        [r_frame, model_frame.with_fiber(m)],
        [rows.reshape(r_part.shape), h_part],
    )

    new_frame = rebuilt.K.frame
    blocks = max(model_frame.blocks, new_frame.blocks)
    target = model_frame.with_blocks(blocks)
    expected = model_frame.resize(expected, target)
    if per_element:
        actual = new_frame.resize(
            np.column_stack([e.coords for e in rebuilt.per_element]), target
        )
        gap = expected - actual
    else:
        onb = new_frame.resize(rebuilt.K.onb, target)
        gap = expected - onb @ (onb.conj().T @ expected)
    return float(np.max(np.linalg.norm(gap, axis=0), initial=0.0))


def verify_canonical_conditions(
    representation: DecompositionResult | Representation,
    M: Subspace,
    tol: float = ACCEPTANCE_TOL,
) -> CheckReport:
    """Recompute the canonical conditions for every element of `M`.

    For a decomposition the elements are the basis of `M` paired with their
    stored coordinates. For a bare `(G, K)` pair they are the images of an
    orthonormal basis of `K`. In both cases the recursion is replayed from
    scratch with `W = span G` and compared to the stored `Aₙ` (C1) and `H`
    blocks (C2), next to the norm identity (C3). The whole construction is
    then rerun with the basis of `W` rotated by a unitary `Q`; the rows `Aₙ`
    must come back as `QᴴAₙ` and the `H` blocks unchanged (`uniqueness`).

    Returns:
        Residuals `c1`, `c2`, `c3`, `reconstruction`, `containment` and
        `uniqueness`, with the flags `pinned` (shifting any entry of any
        `Aₙ` by 1e-3 breaks C1) and `terminated`.
    """
    frame = M.frame
    model, coords, targets = _canonical_inputs(representation, M)
    if model.frame != frame:
        raise FrameMismatchError(frame.descriptor(), model.frame.descriptor())
    model_frame = model.K.frame
    G = model.g_matrix
    p, m = G.shape[1], frame.fiber

    ext, images = synthesize(frame, G, model_frame, coords)
    if targets is None:
        targets_ext = images
    else:
        targets_ext = frame.resize(targets, ext)
    M_ext = M.embed(ext)
    G_ext = frame.resize(G, ext)

    r_part, h_part = split_fibers(model_frame, coords, [p, m])
    r_blocks = model_frame.with_fiber(p).as_blocks(r_part)[:, 0]
    h_blocks = model_frame.with_fiber(m).as_blocks(h_part)
    stored = model_frame.blocks

    c1 = c2 = 0.0
    terminated = True
    pinned = True
    for col, F in enumerate(targets_ext.T):
        current = F
        floor = CONSTRUCTION_TOL * float(np.linalg.norm(F))
        n = 0
        while n < stored or np.linalg.norm(current) > floor:
            if n >= MAX_ITERATIONS:
                terminated = False
                break
            a = r_blocks[n, :, col] if n < stored else np.zeros(p)
            diff = G_ext.conj().T @ current - a
            c1 = max(c1, float(np.linalg.norm(G_ext @ diff)))
            shifted = diff[:, None] - _PIN_OFFSET * np.eye(p)
            if p and np.min(np.linalg.norm(G_ext @ shifted, axis=0)) <= tol:
                pinned = False

            following = M_ext.project_coords(current) - G_ext @ (
                G_ext.conj().T @ current
            )
            head = ext.as_blocks(following)[0]
            h = h_blocks[n, ..., col] if n < stored else 0.0
            c2 = max(c2, float(np.linalg.norm(head - h)))
            current = ext.shift_back(following)
            n += 1

    norms_f = np.linalg.norm(targets_ext, axis=0) ** 2
    c3 = np.abs(norms_f - np.linalg.norm(coords, axis=0) ** 2)
    uniqueness = _rotation_residual(
        M, G, model_frame, coords, per_element=targets is not None
    )
    inside = M_ext.project_coords(images)

    return CheckReport(
        "canonical_conditions",
        {
            "c1": c1,
            "c2": c2,
            "c3": float(np.max(c3, initial=0.0)),
            "reconstruction": spectral_norm(targets_ext - images),
            "containment": spectral_norm(images - inside),
            "uniqueness": uniqueness,
        },
        tol,
        flags={"pinned": pinned, "terminated": terminated},
        details={"p": p, "elements": int(coords.shape[1])},
    )


def check_thm36_converse(
    G: Sequence[WoldVector],
    K: Subspace,
    M: Subspace,
    tol: float = ACCEPTANCE_TOL,
) -> float:
    """Invariance residual of `M` under `T*_Φ - Σ T*_Φ Gᵢ ⊗ Gᵢ`.

    The hypotheses are checked first: `G` orthonormal inside `M`, `K`
    model-supported in its first `p` fibers and backward shift invariant,
    and `(R, H) ↦ G·R + H` a unitary of `K` onto `M` inside the frame.

    Raises:
        HypothesisError: Naming the first hypothesis that fails.

    Returns:
        `‖(I - P_M)(T*_Φ - Σ T*_Φ Gᵢ ⊗ Gᵢ)P_M‖`.
    """
    frame = M.frame
    check_vectors(frame, G)
    g = stack(G, frame)
    p = g.shape[1]

    orthonormal = orthonormality_residual(g)
    if orthonormal > tol:
        raise HypothesisError("orthonormality", orthonormal)
    outside = spectral_norm(g - M.project_coords(g))
    if outside > tol:
        raise HypothesisError("orthonormality", outside, "G leaves M")

    support = model_support_residual(K, p)
    if support > tol:
        raise HypothesisError("model support", support)
    invariance = backward_residual(K)
    if invariance > tol:
        raise HypothesisError("shift invariance", invariance)

    image = model_image(frame, G, K)
    if image.outside > tol:
        raise HypothesisError("frame containment", image.outside)
    isometry = isometry_residual(image, M)
    if isometry > tol:
        raise HypothesisError("isometry", isometry)

    pairs = [(WoldVector(frame, frame.shift_back(v.coords)), v) for v in G]
    operator = perturbed_backward(frame, pairs)
    residual = invariance_residual(operator.mat, M)
    log.debug("Converse invariance residual %.3e with p=%d.", residual, p)
    return residual


def forward_thm37(
    M: Subspace,
    Us: Sequence[WoldVector],
    Vs: Sequence[WoldVector],
    tol: float = ACCEPTANCE_TOL,
    guard: int = DEFAULT_GUARD,
) -> ForwardResult:
    """Decompose `M^⊥` for `M` invariant under `T_Φ - Σ Vᵢ ⊗ Uᵢ`.

    `M^⊥` is invariant under `T*_Φ - Σ Uᵢ ⊗ Vᵢ`, so the backward
    decomposition applies with the factors swapped and `N = K^⊥`.

    Args:
        M: Subspace kept clear of the top `guard` blocks.
        Us: Left factors of the perturbation.
        Vs: Right factors of the perturbation.
        tol: Acceptance level.
        guard: Number of top blocks `M` must leave empty.

    Raises:
        HypothesisError: If `M` reaches into the guard band.
        NotInvariantError: If `M` is not invariant within `tol`.

    Returns:
        `p`, `G ⊆ M^⊥`, the forward invariant `N` and the residuals.
    """
    frame = M.frame
    check_vectors(frame, [*Us, *Vs])
    if guard:
        spill = frame.tail_norm(M.onb, frame.blocks - guard)
        if spill > tol:
            raise HypothesisError("guard band", spill)

    operator = perturbed_forward(frame, list(zip(Vs, Us)))
    residual = invariance_residual(operator.mat, M)
    if residual > tol:
        raise NotInvariantError(residual, tol)

    decomposition = decompose_thm32(complement(M), Vs, Us, tol)
    K = decomposition.K
    checks = decomposition.checks | {
        "n_invariance": forward_residual(K),
        "precondition": residual,
    }
    unitary = max(
        decomposition.checks["isometry"], decomposition.checks["reconstruction"]
    )
    return ForwardResult(
        decomposition.p,
        decomposition.G,
        complement(K),
        unitary,
        checks,
        decomposition,
    )


def model_tuple(F: WoldVector, Fs: Sequence[WoldVector]) -> WoldVector:
    """`(T*_{F₁}F, …, T*_{F_p}F, F)` in the frame over `ℂ^{p+m}`."""
    frame = F.frame
    check_vectors(frame, Fs)
    p = len(Fs)
    scalar = frame.with_fiber(1)
    parts = [column_multiplier(Fi).mat.conj().T @ F.coords for Fi in Fs]
    if parts:
        r = join_fibers([scalar] * p, parts)
    else:
        r = np.zeros(0, dtype=np.complex128)
    joined = join_fibers([frame.with_fiber(p), frame], [r, F.coords])
    return WoldVector(frame.with_fiber(p + frame.fiber), joined)


def membership_via_model(
    F: WoldVector,
    Fs: Sequence[WoldVector],
    Nspace: Subspace,
    tol: float = ACCEPTANCE_TOL,
) -> bool:
    """Whether `(T*_{F₁}F, …, T*_{F_p}F, F)` lies in `Nspace`.

    For `N` from [forward_thm37][toeplitz_lab.structure.forward_thm37] this
    is membership of `F` in `M`.

    Raises:
        FrameMismatchError: If `Nspace` does not sit over `ℂ^{p+m}` on the
            frame of `F` with at least as many blocks.
    """
    candidate = model_tuple(F, Fs)
    target = Nspace.frame
    if target.with_blocks(candidate.frame.blocks) != candidate.frame:
        raise FrameMismatchError(
            candidate.frame.descriptor(), target.descriptor()
        )
    padded = candidate.embed(target)
    return Nspace.contains(padded, tol)


def check_thm37_converse(
    Fs: Sequence[WoldVector],
    Nspace: Subspace,
    M: Subspace,
    tol: float = ACCEPTANCE_TOL,
) -> float:
    """Invariance residual of `M` under `T_Φ - Σ Fᵢ ⊗ T*_Φ Fᵢ`.

    Checks first that the `Fᵢ` are orthonormal in `M^⊥`, that `N^⊥` is
    model-supported in its first `p` fibers, that `N` is forward shift
    invariant and that `(R, H) ↦ G·R + H` maps `N^⊥` unitarily onto `M^⊥`.

    Raises:
        HypothesisError: Naming the first hypothesis that fails.

    Returns:
        `‖(I - P_M)(T_Φ - Σ Fᵢ ⊗ T*_Φ Fᵢ)P_M‖` on the truncated frame.
    """
    frame = M.frame
    check_vectors(frame, Fs)
    f = stack(Fs, frame)
    p = f.shape[1]

    orthonormal = orthonormality_residual(f)
    if orthonormal > tol:
        raise HypothesisError("orthonormality", orthonormal)
    inside = spectral_norm(M.project_coords(f))
    if inside > tol:
        raise HypothesisError("orthonormality", inside, "F is not in M^⊥")

    K = complement(Nspace)
    support = model_support_residual(K, p)
    if support > tol:
        raise HypothesisError("model support", support)
    invariance = forward_residual(K)
    if invariance > tol:
        raise HypothesisError("shift invariance", invariance)

    image = model_image(frame, Fs, K)
    if image.outside > tol:
        raise HypothesisError("frame containment", image.outside)
    isometry = isometry_residual(image, complement(M))
    if isometry > tol:
        raise HypothesisError("isometry", isometry)

    pairs = [(v, WoldVector(frame, frame.shift_back(v.coords))) for v in Fs]
    operator = perturbed_forward(frame, pairs)
    return invariance_residual(operator.mat, M)
