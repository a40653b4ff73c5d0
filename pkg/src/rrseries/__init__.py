"""Exact formal power series and q-series identity verification."""

from .errors import SeriesError
from .series import Series, compose, extract_product_exponents, invert, mul, reversion, substitute_power
from .identities import REGISTRY, verify_identity

__all__ = [
    "SeriesError",
    "Series",
    "compose",
    "extract_product_exponents",
    "invert",
    "mul",
    "reversion",
    "substitute_power",
    "REGISTRY",
    "verify_identity",
]
