"""Tolerances and defaults that the algorithms and the lab harness use.

Exposed as a public module in order to allow the user to patch values before
importing one of the algorithm modules or to set them through environment
variables.

Examples:
    >>> import toeplitz_lab.constants
    >>> toeplitz_lab.constants.ACCEPTANCE_TOL = 1e-6
    >>> from toeplitz_lab.structure import decompose_thm32
"""

from __future__ import annotations

import os

CONSTRUCTION_TOL: float = float(
    os.environ.get("TLAB_CONSTRUCTION_TOL", "1e-12")
)
"""Float-noise level. Recursions stop once iterates fall below this relative
to the starting norm.
"""

VERIFICATION_TOL: float = float(
    os.environ.get("TLAB_VERIFICATION_TOL", "1e-10")
)
"""Algorithmic residue level. Termination of recursions is asserted here."""

ACCEPTANCE_TOL: float = float(os.environ.get("TLAB_ACCEPTANCE_TOL", "1e-8"))
"""Pass/fail level for every invariant check."""

RANK_TOL: float = float(os.environ.get("TLAB_RANK_TOL", "1e-10"))
"""Relative tolerance for discarding dependent directions."""

INTERSECTION_EPS: float = float(
    os.environ.get("TLAB_INTERSECTION_EPS", "1e-8")
)
"""Singular values of `onb1ᴴ·onb2` at or above `1 - eps` mark a shared
direction.
"""

DEFAULT_BLOCKS: int = int(os.environ.get("TLAB_BLOCKS", "8"))
"""Default number of Wold blocks of a frame."""

DEFAULT_TAYLOR_DEGREE: int = int(os.environ.get("TLAB_TAYLOR_DEGREE", "200"))
"""Default Taylor truncation degree of a frame."""

DEFAULT_GUARD: int = int(os.environ.get("TLAB_GUARD", "2"))
"""Blocks kept empty at the top of a frame for forward shift checks."""

ZERO_CAP: float = float(os.environ.get("TLAB_ZERO_CAP", "0.7"))
"""Largest modulus of a generated Blaschke zero."""

MAX_ITERATIONS: int = int(os.environ.get("TLAB_MAX_ITERATIONS", "512"))
"""Cap on the steps of the structure recursions."""

SCHEMA_VERSION: int = 1
"""Version tag written to every scenario and ledger file."""

MAX_DEGREE: int = 3
"""Cap on the degree of the generated symbol B."""

MAX_DEGREE_PRIME: int = 5
"""Cap on the degree of the generated symbol B′."""

MAX_FIBER: int = 3
"""Cap on the fiber dimension m."""

MAX_BLOCKS: int = 10
"""Cap on the block count N of generated frames."""

MAX_PERTURBATION_RANK: int = 3
"""Cap on the number of perturbation pairs k."""

MAX_DEFECT: int = 3
"""Cap on the generated defect n."""
