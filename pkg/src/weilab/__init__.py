"""Exact computations in Weil algebras D^r_k / I over the rationals."""
from .poly import RingContext, TruncPoly, parse_poly
from .weil import AlgebraSpec, WeilAlgebra, load_spec, parse_spec

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpec",
    "RingContext",
    "TruncPoly",
    "WeilAlgebra",
    "load_spec",
    "parse_poly",
    "parse_spec",
]
