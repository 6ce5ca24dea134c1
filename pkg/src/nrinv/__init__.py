"""Non-semisimple quantum invariants of 3-manifolds at q = exp(i pi / r)."""

from .errors import InvariantError
from .qarith import QParams

__version__ = "0.1.0"

__all__ = ["InvariantError", "QParams", "__version__"]
