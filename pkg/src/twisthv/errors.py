"""Typed exceptions shared across the package."""

from __future__ import annotations


class HVError(Exception):
    """Base class for all domain errors raised by the library."""


class AlgebraMismatch(HVError):
    """Operands belong to different algebras, or the wrong algebra was given."""


class SymbolError(HVError):
    """A basis symbol is malformed or excluded."""


class ParseError(HVError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ModuleError(HVError):
    """Invalid module specification or an operation unsupported by a module kind."""


class UntrustedWindow(HVError):
    """A computation left the degree range where truncation is harmless."""


class Inconclusive(HVError):
    """The window is too small to certify the requested quantity."""


class LocalityError(HVError):
    """Declared locality order is too small for the given pair of fields."""


class ZOrderError(HVError):
    """The z-expansion order is too small for the requested coefficient."""


class AsymmetricGram(HVError):
    """Gram matrix is not symmetric, so positivity is not meaningful."""


class ParameterError(HVError):
    """Parameters outside the supported range (for example non-coprime p, q)."""
