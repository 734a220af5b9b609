"""Constructions, verification and existence decisions for signed magic arrays."""

from .core import (
    ArgumentError,
    ArraySpec,
    CompositionError,
    ProviderError,
    ProviderTimeout,
    SignedGrid,
    SignedMagicError,
    SpecError,
    UnsupportedParameters,
    VerificationReport,
    diagonal_width,
    symbol_set,
    verify,
)
from .decide import Decision, Verdict, decide_double_rectangle, decide_square, decide_tight

__all__ = [
    "ArgumentError",
    "ArraySpec",
    "CompositionError",
    "Decision",
    "ProviderError",
    "ProviderTimeout",
    "SignedGrid",
    "SignedMagicError",
    "SpecError",
    "UnsupportedParameters",
    "Verdict",
    "VerificationReport",
    "decide_double_rectangle",
    "decide_square",
    "decide_tight",
    "diagonal_width",
    "symbol_set",
    "verify",
]
