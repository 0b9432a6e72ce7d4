"""Structure theorems for subspaces of vector-valued Hardy spaces.

Decompositions of invariant, almost invariant and nearly invariant subspaces
of finite-rank perturbations of the block shifts, together with the
converse checkers.
"""

from __future__ import annotations

from ._almost import almost_converse_thm310
from ._almost import almost_decompose_thm310
from ._almost import almost_defect
from ._almost import almost_equiv_check
from ._invariant import check_thm36_converse
from ._invariant import check_thm37_converse
from ._invariant import decompose_thm32
from ._invariant import forward_thm37
from ._invariant import membership_via_model
from ._invariant import model_tuple
from ._invariant import verify_canonical_conditions
from ._model import model_image
from ._model import rebuild_from_model
from ._nearly import nearly_check
from ._nearly import nearly_decompose_thm313
from ._nearly import nearly_defect
from ._nearly import nearly_defect_converse
from ._nearly import nearly_defect_decompose
from ._nearly import wandering_bound_lemma39
from ._results import CheckReport
from ._results import DecompositionResult
from ._results import DefectDecomposition
from ._results import DefectReport
from ._results import ElementDecomposition
from ._results import ForwardResult
from ._results import ModelImage
from ._results import NearlyResult
from ._results import Representation
from ._results import WanderingBound

__all__ = (
    "CheckReport",
    "DecompositionResult",
    "DefectDecomposition",
    "DefectReport",
    "ElementDecomposition",
    "ForwardResult",
    "ModelImage",
    "NearlyResult",
    "Representation",
    "WanderingBound",
    "almost_converse_thm310",
    "almost_decompose_thm310",
    "almost_defect",
    "almost_equiv_check",
    "check_thm36_converse",
    "check_thm37_converse",
    "decompose_thm32",
    "forward_thm37",
    "membership_via_model",
    "model_image",
    "model_tuple",
    "nearly_check",
    "nearly_decompose_thm313",
    "nearly_defect",
    "nearly_defect_converse",
    "nearly_defect_decompose",
    "rebuild_from_model",
    "verify_canonical_conditions",
    "wandering_bound_lemma39",
)
