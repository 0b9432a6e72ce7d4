# noqa: D100

from __future__ import annotations

__name__ = "toeplitz-lab"
__description__ = (
    "Finite-truncation verification lab for structure theorems of perturbed"
    " Toeplitz operators on vector-valued Hardy spaces."
)
__url__ = "https://github.com/ddkasa/toeplitz-lab"
__author__ = "David Kasakaitis"
__author_email__ = "davidkasakaitis@proton.me"
__version__ = "0.1.0"
__license__ = "MIT"
