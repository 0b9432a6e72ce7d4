from __future__ import annotations

from typing import Literal
from typing import TypeAlias

import numpy as np
import numpy.typing as npt

ComplexArray: TypeAlias = npt.NDArray[np.complex128]
FloatArray: TypeAlias = npt.NDArray[np.float64]
ComplexPair: TypeAlias = list[float]
"""A complex number serialized as `[re, im]`."""

Exactness: TypeAlias = Literal["exact", "truncation-leaky"]
RecordStatus: TypeAlias = Literal["pass", "fail", "invalid-instance"]
ReportFormat: TypeAlias = Literal["text", "json"]
