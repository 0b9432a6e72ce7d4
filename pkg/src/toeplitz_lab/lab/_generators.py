"""Seeded instance generators, one per theorem.

Every draw goes through `numpy.random.Generator(PCG64(seed))` in a fixed
order, so a seed and a parameter set always produce the same payload.
Complex entries have independent real and imaginary parts uniform in
`[-1, 1]`; zeros of generated products have modulus `cap·√u` and argument
`2πv`.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import TYPE_CHECKING
from typing import Any

import numpy as np
import scipy.linalg as spla

from toeplitz_lab._blaschke import BlaschkeProduct
from toeplitz_lab._exceptions import ParameterCapError
from toeplitz_lab._hardy import WoldVector
from toeplitz_lab._hardy import frame_build
from toeplitz_lab._hardy import join_fibers
from toeplitz_lab._linspace import Subspace
from toeplitz_lab._linspace import complement
from toeplitz_lab._linspace import extend_basis
from toeplitz_lab._linspace import krylov_closure
from toeplitz_lab._toeplitz import perturbed_backward
from toeplitz_lab._toeplitz import toeplitz_adjoint
from toeplitz_lab._toeplitz import toeplitz_forward
from toeplitz_lab.constants import MAX_BLOCKS
from toeplitz_lab.constants import MAX_DEFECT
from toeplitz_lab.constants import MAX_DEGREE
from toeplitz_lab.constants import MAX_DEGREE_PRIME
from toeplitz_lab.constants import MAX_FIBER
from toeplitz_lab.constants import MAX_PERTURBATION_RANK
from toeplitz_lab.constants import RANK_TOL
from toeplitz_lab.constants import ZERO_CAP
from toeplitz_lab.structure import model_image
from toeplitz_lab.structure import rebuild_from_model

from ._scenario import Parameters
from ._scenario import Scenario
from ._scenario import pack_vectors

if TYPE_CHECKING:
    from collections.abc import Callable

    from toeplitz_lab._hardy import WoldFrame
    from toeplitz_lab._types import ComplexArray

    from ._scenario import TheoremId

    Payload = dict[str, Any]
    InstanceBuilder = Callable[[np.random.Generator, Parameters], Payload]

log = logging.getLogger(__name__)

_DEFECT_THEOREMS = frozenset({"thm42", "thm44", "thm45"})
_SAMPLES = 10
_CHAIN_FLOOR = 1e-6


def make_rng(seed: int) -> np.random.Generator:
    """The seeded generator behind every draw."""
    return np.random.Generator(np.random.PCG64(seed))


def check_caps(theorem: TheoremId, params: Parameters) -> None:
    """Validate parameter ranges against the generator caps.

    Raises:
        ParameterCapError: Naming the first parameter out of range.
    """
    defect = theorem in _DEFECT_THEOREMS
    k_cap = MAX_DEFECT if defect else MAX_PERTURBATION_RANK
    limits = {
        "l": (params.l, 1, MAX_DEGREE),
        "lp": (params.lp, 1, MAX_DEGREE_PRIME),
        "m": (params.m, 1, MAX_FIBER),
        "k": (params.k, 1, k_cap),
        "blocks": (params.blocks, 2, MAX_BLOCKS),
        "guard": (params.guard, 0, params.blocks - 2),
        "taylor_degree": (params.taylor_degree, params.l + params.lp, None),
    }
    for name, (value, low, high) in limits.items():
        if value < low or (high is not None and value > high):
            msg = f"Parameter {name}={value} outside [{low}, {high}]."
            raise ParameterCapError(msg)
    if theorem in {"thm313", *_DEFECT_THEOREMS} and params.lp < params.l:
        msg = f"B′ of degree {params.lp} cannot be divisible by B."
        raise ParameterCapError(msg)


def _uniform(rng: np.random.Generator, shape: tuple[int, ...]) -> Any:
    return rng.uniform(-1.0, 1.0, shape) + 1j * rng.uniform(-1.0, 1.0, shape)


def random_zeros(
    rng: np.random.Generator, count: int, cap: float = ZERO_CAP
) -> list[complex]:
    """Zeros with modulus `cap·√u` and argument `2πv`."""
    radius = cap * np.sqrt(rng.uniform(0.0, 1.0, count))
    angle = 2 * np.pi * rng.uniform(0.0, 1.0, count)
    return [complex(z) for z in radius * np.exp(1j * angle)]


def random_product(
    rng: np.random.Generator,
    degree: int,
    *,
    origin_only: bool = False,
    anchored: bool = True,
) -> BlaschkeProduct:
    """Product of `degree` factors, with a zero at the origin if `anchored`."""
    fixed = [0j] if anchored else []
    free = degree - len(fixed)
    zeros = [0j] * free if origin_only else random_zeros(rng, free)
    return BlaschkeProduct.from_zeros(fixed + zeros)


def random_vector(
    rng: np.random.Generator, frame: WoldFrame, support: int | None = None
) -> WoldVector:
    """Unit vector with entries in the first `support` blocks."""
    support = frame.blocks if support is None else support
    blocks = np.zeros(frame.shape, dtype=np.complex128)
    blocks[:support] = _uniform(rng, (support, *frame.shape[1:]))
    return WoldVector(frame, blocks.ravel() / np.linalg.norm(blocks))


def model_vector(
    rng: np.random.Generator, frame: WoldFrame, support: int
) -> ComplexArray:
    """Unit coordinates at model index zero in the first `support` blocks."""
    blocks = np.zeros(frame.shape, dtype=np.complex128)
    blocks[:support, 0] = _uniform(rng, (support, frame.fiber))
    return np.asarray(blocks.ravel() / np.linalg.norm(blocks))


def head_columns(
    rng: np.random.Generator, frame: WoldFrame, count: int
) -> ComplexArray:
    """`count` orthonormal columns supported in block zero."""
    raw = _uniform(rng, (frame.block_dim, count))
    q, _ = spla.qr(raw, mode="economic")
    columns = np.zeros((frame.dim, count), dtype=np.complex128)
    columns[: frame.block_dim] = q
    return columns


def unit_seeds(frame: WoldFrame, count: int) -> list[ComplexArray]:
    """Constants `Eᵢ` for the first `count` fibers of `frame`."""
    seeds = []
    for s in range(count):
        seed = np.zeros(frame.dim, dtype=np.complex128)
        seed[frame.index(0, 0, s)] = 1.0
        seeds.append(seed)
    return seeds


def _closure(
    frame: WoldFrame, seeds: list[ComplexArray], *, forward: bool = False
) -> Subspace:
    shift = toeplitz_forward(frame) if forward else toeplitz_adjoint(frame)
    vectors = [WoldVector(frame, s) for s in seeds]
    return krylov_closure([shift], vectors, RANK_TOL, frame=frame)


def _base_frame(rng: np.random.Generator, params: Parameters) -> WoldFrame:
    B = random_product(rng, params.l, origin_only=params.origin_only)
    return frame_build(B, params.m, params.blocks, params.taylor_degree)


def _prime(
    rng: np.random.Generator, frame: WoldFrame, lp: int
) -> BlaschkeProduct:
    extra = random_product(rng, lp - frame.model_dim, anchored=False)
    return frame.blaschke * extra


def _support(rng: np.random.Generator, top: int) -> int:
    return int(rng.integers(1, max(top, 1) + 1))


def invariant_instance(
    rng: np.random.Generator, params: Parameters
) -> Payload:
    """`M` invariant under `T*_Φ - Σ Vᵢ ⊗ Uᵢ` by Krylov closure.

    Seeds and right factors live in the lower blocks so `M` stays a proper
    subspace. With `orthogonal` the closure is taken under `T*_Φ` alone and
    the `Uᵢ` are projected onto `M^⊥`, giving `p = 0`.
    """
    frame = _base_frame(rng, params)
    support = _support(rng, frame.blocks - 1)
    seeds = [
        random_vector(rng, frame, support)
        for _ in range(int(rng.integers(1, 3)))
    ]
    if params.orthogonal:
        M = _closure(frame, [s.coords for s in seeds])
        outside = complement(M)
        Us = [
            WoldVector(
                frame, outside.project_coords(random_vector(rng, frame).coords)
            )
            for _ in range(params.k)
        ]
        Vs = [random_vector(rng, frame) for _ in range(params.k)]
    else:
        Us = [random_vector(rng, frame) for _ in range(params.k)]
        Vs = [random_vector(rng, frame, support) for _ in range(params.k)]
        operator = perturbed_backward(frame, list(zip(Vs, Us)))
        M = krylov_closure([operator], seeds, RANK_TOL, frame=frame)
    return {
        "frame": frame.descriptor(),
        "M": M.to_json(),
        "Us": pack_vectors(Us),
        "Vs": pack_vectors(Vs),
    }


def converse_instance(
    rng: np.random.Generator, params: Parameters
) -> Payload:
    """Model data `(G, K)` first, then `M = [G, I_m]K`.

    `G` is orthonormal in block zero and every `H` block is kept orthogonal
    to it, so the synthesis map is an isometry.
    """
    frame = _base_frame(rng, params)
    p = min(params.k, frame.block_dim)
    G = head_columns(rng, frame, p)
    head = G[: frame.block_dim]
    model_frame = frame.with_fiber(p + frame.fiber)
    support = _support(rng, frame.blocks - 1)

    seeds = unit_seeds(model_frame, p)
    for _ in range(int(rng.integers(1, 3))):
        r = model_vector(rng, frame.with_fiber(p), support)
        h = frame.as_blocks(random_vector(rng, frame, support).coords)
        flat = h.reshape(frame.blocks, -1)
        flat -= (flat @ head.conj()) @ head.T
        seeds.append(
            join_fibers(
                [frame.with_fiber(p), frame], [r, flat.reshape(frame.dim)]
            )
        )
    K = _closure(model_frame, seeds)
    G_vectors = [WoldVector(frame, g) for g in G.T]
    M = model_image(frame, G_vectors, K).restrict()
    return {
        "frame": frame.descriptor(),
        "G": pack_vectors(G_vectors),
        "K": K.to_json(),
        "M": M.to_json(),
    }


def forward_instance(
    rng: np.random.Generator, params: Parameters
) -> Payload:
    """`M` invariant under `T_Φ - Σ Vᵢ ⊗ Uᵢ` below the guard band.

    `M` is spanned by chains `x, T x, …, T^{r-1}x`. Each chain is closed by
    one rank-one term sending its last vector to zero, with `Uᵢ` orthogonal
    to every other chain vector.
    """
    frame = _base_frame(rng, params)
    top = frame.blocks - params.guard
    forward = toeplitz_forward(frame).mat
    chains: list[list[ComplexArray]] = []
    for _ in range(params.k):
        length = int(rng.integers(1, 3)) if top > 1 else 1
        x = random_vector(rng, frame, _support(rng, top - length + 1))
        chain = [x.coords]
        for _ in range(length):
            chain.append(forward @ chain[-1])
        chains.append(chain)

    kept: list[list[ComplexArray]] = []
    basis = np.zeros((frame.dim, 0), dtype=np.complex128)
    for chain in chains:
        members = _stack(frame, chain[:-1])
        fresh = extend_basis(basis, members, _CHAIN_FLOOR, 1.0)
        if fresh.shape[1] == members.shape[1]:
            kept.append(chain)
            basis = np.hstack([basis, fresh])

    Us: list[WoldVector] = []
    Vs: list[WoldVector] = []
    for chain in kept:
        others = [v for c in kept if c is not chain for v in c[:-1]]
        last = chain[-2]
        span = _orthonormal(frame, others + chain[:-2])
        residual = last - span @ (span.conj().T @ last)
        Us.append(WoldVector(frame, residual / np.linalg.norm(residual) ** 2))
        Vs.append(WoldVector(frame, chain[-1]))

    M = Subspace.from_columns(
        frame, _stack(frame, [v for c in kept for v in c[:-1]]), RANK_TOL
    )
    samples = [
        WoldVector(frame, M.onb @ _uniform(rng, (M.dim,)))
        for _ in range(_SAMPLES)
    ]
    samples += [random_vector(rng, frame) for _ in range(_SAMPLES)]
    return {
        "frame": frame.descriptor(),
        "M": M.to_json(),
        "Us": pack_vectors(Us),
        "Vs": pack_vectors(Vs),
        "samples": pack_vectors(samples),
    }


def _stack(frame: WoldFrame, columns: list[ComplexArray]) -> ComplexArray:
    if not columns:
        return np.zeros((frame.dim, 0), dtype=np.complex128)
    return np.column_stack(columns)


def _orthonormal(
    frame: WoldFrame, columns: list[ComplexArray]
) -> ComplexArray:
    empty = np.zeros((frame.dim, 0), dtype=np.complex128)
    return extend_basis(empty, _stack(frame, columns), RANK_TOL, 1.0)


def random_subspace_instance(
    rng: np.random.Generator, params: Parameters
) -> Payload:
    """A random subspace and a product `B′` of degree `lp`."""
    frame = _base_frame(rng, params)
    dim = int(rng.integers(1, frame.dim + 1))
    M = Subspace.from_columns(frame, _uniform(rng, (frame.dim, dim)))
    Bp = random_product(rng, params.lp, anchored=False)
    return {
        "frame": frame.descriptor(),
        "M": M.to_json(),
        "Bp": Bp.to_json(),
    }


def nearly_instance(rng: np.random.Generator, params: Parameters) -> Payload:
    """`M = G·Nsub` for a `T*_B ⊗ I_p`-invariant `Nsub` containing `ℂᵖ`.

    `G` is orthonormal in block zero, which makes `G` span the wandering
    part of `M` for `B′ = B`.
    """
    frame = _base_frame(rng, params)
    Bp = _prime(rng, frame, params.lp)
    p = min(params.k, frame.block_dim)
    G = head_columns(rng, frame, p)
    scalar = frame.with_fiber(p)
    support = _support(rng, frame.blocks)
    seeds = unit_seeds(scalar, p)
    seeds += [
        model_vector(rng, scalar, support)
        for _ in range(int(rng.integers(1, 3)))
    ]
    Nsub = _closure(scalar, seeds)
    G_vectors = [WoldVector(frame, g) for g in G.T]
    M = rebuild_from_model(G_vectors, Nsub, frame)
    return {
        "frame": frame.descriptor(),
        "Bp": Bp.to_json(),
        "G": pack_vectors(G_vectors),
        "Nsub": Nsub.to_json(),
        "M": M.to_json(),
    }


def defect_instance(
    rng: np.random.Generator, params: Parameters, defect: int
) -> Payload:
    """`M = {G·R + B·Σ hᵢJᵢ}` with `G` and `J` orthonormal in block zero.

    Case `ii` (no `G`) is drawn with probability one half when case `i`
    fits, and always when `l·m` leaves no room next to the defect.
    """
    frame = _base_frame(rng, params)
    if defect > frame.block_dim:
        msg = f"Defect {defect} exceeds the block dimension {frame.block_dim}."
        raise ParameterCapError(msg)
    Bp = _prime(rng, frame, params.lp)
    room = frame.block_dim - defect
    p = int(rng.integers(1, room + 1)) if room and rng.random() < 0.5 else 0
    columns = head_columns(rng, frame, p + defect)
    G, J = columns[:, :p], columns[:, p:]

    inner = frame.with_fiber(p + defect).with_blocks(frame.blocks - 1)
    support = _support(rng, inner.blocks)
    seeds = unit_seeds(inner, p)
    seeds += [
        model_vector(rng, inner, support)
        for _ in range(int(rng.integers(1, 3)))
    ]
    K = _closure(inner, seeds).embed(inner.with_blocks(frame.blocks))
    G_vectors = [WoldVector(frame, g) for g in G.T]
    J_vectors = [WoldVector(frame, j) for j in J.T]
    M = model_image(frame, G_vectors, K, J_vectors).restrict()
    return {
        "frame": frame.descriptor(),
        "Bp": Bp.to_json(),
        "case": "ii" if p == 0 else "i",
        "G": pack_vectors(G_vectors),
        "Js": pack_vectors(J_vectors),
        "K": K.to_json(),
        "M": M.to_json(),
    }


def decay_instance(rng: np.random.Generator, params: Parameters) -> Payload:
    """`M` invariant under `T_Φ` and a vector `h` to push forward."""
    frame = _base_frame(rng, params)
    support = _support(rng, frame.blocks)
    seeds = [
        random_vector(rng, frame, support).coords
        for _ in range(int(rng.integers(1, 3)))
    ]
    M = _closure(frame, seeds, forward=True)
    h = random_vector(rng, frame)
    return {
        "frame": frame.descriptor(),
        "M": M.to_json(),
        "h": pack_vectors([h])[0],
    }


def _single_defect(rng: np.random.Generator, params: Parameters) -> Payload:
    return defect_instance(rng, params, 1)


def _defect_converse(
    rng: np.random.Generator, params: Parameters
) -> Payload:
    return defect_instance(rng, replace(params, lp=params.l), params.k)


def _defect(rng: np.random.Generator, params: Parameters) -> Payload:
    return defect_instance(rng, params, params.k)


GENERATORS: dict[TheoremId, InstanceBuilder] = {
    "thm32": invariant_instance,
    "thm36": converse_instance,
    "thm37": forward_instance,
    "thm310": invariant_instance,
    "lemma36": invariant_instance,
    "lemma39": random_subspace_instance,
    "thm313": nearly_instance,
    "thm42": _single_defect,
    "thm44": _defect_converse,
    "thm45": _defect,
    "c0decay": decay_instance,
}


def generate(
    seed: int, theorem: TheoremId, params: Parameters | None = None
) -> Scenario:
    """Build the scenario of `theorem` for `seed`.

    Args:
        seed: Unsigned 64-bit seed.
        theorem: Theorem identifier.
        params: Sizes and tolerance, defaults when omitted.

    Raises:
        ParameterCapError: If the seed or a parameter is out of range.

    Returns:
        A scenario whose payload depends only on the arguments.
    """
    params = params or Parameters()
    if not 0 <= seed < 2**64:
        msg = f"Seed {seed} is not an unsigned 64-bit integer."
        raise ParameterCapError(msg)
    check_caps(theorem, params)
    payload = GENERATORS[theorem](make_rng(seed), params)
    log.debug("Generated %s scenario for seed %d.", theorem, seed)
    return Scenario(seed, theorem, params, payload)
