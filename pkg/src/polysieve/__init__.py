"""Sieve-based point counting for structured polynomials F(Y, X).

Modules: algebra (fields, sparse polynomials, resultants), structured (the
F(Y, X) shape and good reduction), counting (N, S and root counts),
expsum (exponential sums), sieve (the assembled bound), dualgeom (tangent
hyperplanes and the dual quadric), coeffreduce (the coefficient-reduction
dichotomy) and cli.
"""

from .fixtures import fixture, resolve_instance
from .structured import StructuredF, load_structured, parse_structured
from .weights import SmoothWeightSpec

__version__ = "0.1.0"

__all__ = ["StructuredF", "SmoothWeightSpec", "fixture", "resolve_instance", "load_structured",
           "parse_structured", "__version__"]
