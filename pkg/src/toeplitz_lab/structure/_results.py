"""Result records of the structure layer."""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
from typing import TYPE_CHECKING
from typing import Any
from typing import Literal

import numpy as np

from toeplitz_lab._hardy import WoldFrame
from toeplitz_lab._hardy import WoldVector
from toeplitz_lab._linspace import Subspace
from toeplitz_lab._utility import array_to_pairs
from toeplitz_lab._utility import spectral_norm
from toeplitz_lab.constants import RANK_TOL

if TYPE_CHECKING:
    from collections.abc import Sequence

    from toeplitz_lab._types import ComplexArray


def stack(vectors: Sequence[WoldVector], frame: WoldFrame) -> ComplexArray:
    """Coordinate matrix whose columns are `vectors`, `dim × 0` if empty."""
    if not vectors:
        return np.zeros((frame.dim, 0), dtype=np.complex128)
    return np.column_stack([v.coords for v in vectors])


def unstack(frame: WoldFrame, matrix: ComplexArray) -> list[WoldVector]:
    """Columns of a coordinate matrix as frame vectors."""
    return [WoldVector(frame, col) for col in matrix.T]


@dataclass(frozen=True)
class ElementDecomposition:
    """Representation data of one basis element `F` of `M`.

    Params:
        a_blocks: `steps × p`, row n holds `Aₙ`.
        tail_blocks: Row n holds the n-th tail datum, the `H` block in the
            invariant case and `αₙ₊₁` in the defect case.
        iterate_norms: `‖Lₙ‖` from `n = 0` through termination.
        coords: Coordinates of the pair in the model frame.
        residual: Reconstruction error of `F`.
        norm_gap: `|‖F‖² - ‖coords‖²|`.
    """

    a_blocks: ComplexArray
    tail_blocks: ComplexArray
    iterate_norms: tuple[float, ...]
    coords: ComplexArray
    residual: float
    norm_gap: float

    @property
    def steps(self) -> int:
        """Number of recursion steps taken."""
        return int(self.a_blocks.shape[0])

    def to_json(self) -> dict[str, Any]:
        """Serializable form with matrices as `[re, im]` pairs."""
        return {
            "a_blocks": array_to_pairs(self.a_blocks),
            "tail_blocks": array_to_pairs(self.tail_blocks),
            "iterate_norms": list(self.iterate_norms),
            "coords": array_to_pairs(self.coords),
            "residual": self.residual,
            "norm_gap": self.norm_gap,
        }


@dataclass(frozen=True)
class DefectReport:
    """Defect space of an almost or nearly invariant subspace.

    Params:
        defect: Dimension of the defect space.
        basis: Orthonormal basis, ordered by decreasing singular value.
        residual: Norm of the image part outside `M ⊕ span(basis)`.
        singular_values: All singular values of the outgoing block.
    """

    defect: int
    basis: tuple[WoldVector, ...]
    residual: float
    singular_values: tuple[float, ...] = ()

    @property
    def witness(self) -> float:
        """Smallest kept singular value, the cost of dropping a vector."""
        if not self.defect:
            return 0.0
        return self.singular_values[self.defect - 1]

    def to_json(self) -> dict[str, Any]:
        """Serializable form of the report."""
        return {
            "defect": self.defect,
            "basis": [v.to_json()["coords"] for v in self.basis],
            "residual": self.residual,
            "singular_values": list(self.singular_values),
        }


@dataclass(frozen=True, eq=False)
class Representation:
    """Model data `(G, K)`, optionally with defect functions `Js`.

    Without `Js` the model frame carries `(R, H)` over `ℂ^{p+m}`; with `Js`
    it carries `(R, h₁…hₙ)` over `ℂ^{p+n}`.
    """

    frame: WoldFrame
    G: tuple[WoldVector, ...]
    K: Subspace
    Js: tuple[WoldVector, ...] | None = None

    @property
    def p(self) -> int:
        """Number of wandering columns."""
        return len(self.G)

    @property
    def g_matrix(self) -> ComplexArray:
        """The columns of `G` as a coordinate matrix."""
        return stack(self.G, self.frame)

    def to_json(self) -> dict[str, Any]:
        """Serializable form of the model data."""
        payload: dict[str, Any] = {
            "frame": self.frame.descriptor(),
            "G": [g.to_json()["coords"] for g in self.G],
            "K": self.K.to_json(),
        }
        if self.Js is not None:
            payload["Js"] = [j.to_json()["coords"] for j in self.Js]
        return payload


@dataclass(frozen=True, eq=False)
class ModelImage:
    """Images of an orthonormal basis of `K` under the synthesis map.

    Params:
        base: Frame of `M`.
        frame: Extended frame holding the images.
        columns: One image per basis vector of `K`.
        outside: Largest image mass at or beyond the base block count.
    """

    base: WoldFrame
    frame: WoldFrame
    columns: ComplexArray
    outside: float

    def gram_defect(self) -> float:
        """`‖YᴴY - I‖` for the image matrix `Y`."""
        gram = self.columns.conj().T @ self.columns
        return spectral_norm(gram - np.eye(gram.shape[0]))

    def in_base(self) -> ComplexArray:
        """Images cut down to the base frame."""
        return self.frame.resize(self.columns, self.base)

    def restrict(self, rank_tol: float = RANK_TOL) -> Subspace:
        """Span of the images as a subspace of the base frame."""
        return Subspace.from_columns(self.base, self.in_base(), rank_tol)


@dataclass(frozen=True)
class CheckReport:
    """Named residuals and flags of a verifier.

    Params:
        name: Verifier that produced the report.
        checks: Residuals that pass when at most `tolerance`.
        tolerance: The acceptance threshold.
        flags: Boolean conditions that must hold.
        details: Informational values, not part of the verdict.
    """

    name: str
    checks: dict[str, float]
    tolerance: float
    flags: dict[str, bool] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def failures(self) -> list[str]:
        """Names of the checks and flags that did not pass."""
        failed = [k for k, v in self.checks.items() if not v <= self.tolerance]
        return failed + [k for k, v in self.flags.items() if not v]

    @property
    def passed(self) -> bool:
        """Whether every residual and flag passes."""
        return not self.failures

    def to_json(self) -> dict[str, Any]:
        """Serializable form of the report."""
        return {
            "name": self.name,
            "checks": dict(self.checks),
            "tolerance": self.tolerance,
            "flags": dict(self.flags),
            "details": dict(self.details),
            "passed": self.passed,
        }


@dataclass(frozen=True, eq=False)
class DecompositionResult:
    """Output of the invariant-subspace decomposition `M = [G, I_m]K`.

    Params:
        frame: Frame of `M`.
        G: Orthonormal basis of the wandering part.
        K: Model subspace over `ℂ^{p+m}` with as many blocks as the longest
            recursion needed, at least the base block count.
        per_element: One entry per orthonormal basis vector of `M`.
        checks: Named residuals computed at construction.
        defect: Defect report when the decomposition came from an almost
            invariant subspace.
    """

    frame: WoldFrame
    G: tuple[WoldVector, ...]
    K: Subspace
    per_element: tuple[ElementDecomposition, ...]
    checks: dict[str, float]
    defect: DefectReport | None = None

    @property
    def p(self) -> int:
        """Wandering dimension."""
        return len(self.G)

    @property
    def g_matrix(self) -> ComplexArray:
        """The columns of `G` as a coordinate matrix."""
        return stack(self.G, self.frame)

    @property
    def parseval_gap(self) -> float:
        """Largest `|‖F‖² - ‖R‖² - ‖H‖²|` over the basis of `M`."""
        return self.checks["parseval"]

    @property
    def steps(self) -> int:
        """Longest recursion over the basis of `M`."""
        return max((e.steps for e in self.per_element), default=0)

    def representation(self) -> Representation:
        """The `(G, K)` pair."""
        return Representation(self.frame, self.G, self.K)

    def report(self, tolerance: float) -> CheckReport:
        """Construction residuals judged against `tolerance`."""
        return CheckReport(
            "decomposition",
            dict(self.checks),
            tolerance,
            details={"p": self.p, "dim_K": self.K.dim, "steps": self.steps},
        )

    def to_json(self) -> dict[str, Any]:
        """Serializable form, including per-element data."""
        payload = self.representation().to_json() | {
            "p": self.p,
            "checks": dict(self.checks),
            "per_element": [e.to_json() for e in self.per_element],
        }
        if self.defect is not None:
            payload["defect"] = self.defect.to_json()
        return payload


@dataclass(frozen=True, eq=False)
class ForwardResult:
    """Perturbed forward shift decomposition `M^⊥ = [G, I_m]N^⊥`."""

    p: int
    G: tuple[WoldVector, ...]
    Nspace: Subspace
    unitary_residual: float
    checks: dict[str, float]
    decomposition: DecompositionResult


@dataclass(frozen=True, eq=False)
class NearlyResult:
    """Nearly invariant decomposition `M = G·Nsub`."""

    p: int
    G: tuple[WoldVector, ...]
    Nsub: Subspace
    unitary_residual: float
    checks: dict[str, float]
    decomposition: DecompositionResult


@dataclass(frozen=True, eq=False)
class DefectDecomposition:
    """Nearly invariant decomposition with finite defect.

    Case `i` carries `G` and `K` over `ℂ^{p+n}`; case `ii` has no `G` and
    `K` over `ℂⁿ`.
    """

    case: Literal["i", "ii"]
    frame: WoldFrame
    G: tuple[WoldVector, ...]
    Js: tuple[WoldVector, ...]
    K: Subspace
    per_element: tuple[ElementDecomposition, ...]
    checks: dict[str, float]
    defect: DefectReport

    @property
    def p(self) -> int:
        """Wandering dimension, zero in case `ii`."""
        return len(self.G)

    @property
    def n(self) -> int:
        """Number of defect functions."""
        return len(self.Js)

    def representation(self) -> Representation:
        """The `(G, K, Js)` triple."""
        return Representation(self.frame, self.G, self.K, self.Js)


@dataclass(frozen=True)
class WanderingBound:
    """Dimension of `M ⊖ (M ∩ T_{B′}H²)` and its bound `deg B′ · m`."""

    dim: int
    bound: int

    @property
    def holds(self) -> bool:
        """Whether the dimension respects the bound."""
        return self.dim <= self.bound
