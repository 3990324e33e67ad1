"""Exact computer algebra for the twisted Heisenberg-Virasoro algebras and their vertex algebras."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AlgebraMismatch,
    AsymmetricGram,
    HVError,
    Inconclusive,
    LocalityError,
    ModuleError,
    ParameterError,
    ParseError,
    SymbolError,
    UntrustedWindow,
    ZOrderError,
)
from .scalar import Scalar  # noqa: E402

__all__ = [
    "AlgebraMismatch", "AsymmetricGram", "HVError", "Inconclusive", "LocalityError", "ModuleError",
    "ParameterError", "ParseError", "Scalar", "SymbolError", "UntrustedWindow", "ZOrderError", "__version__",
]
