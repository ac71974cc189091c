"""Homological invariants of simplicial posets and their face rings.

Everything is computed exactly, over the rationals or a prime field.
"""

from .fileformat import dump, load, to_json, validate
from .linalg import GF2, KERNEL, QQ, Field
from .poset import (
    BadSubset,
    LinkView,
    NoBottom,
    NonBoolean,
    OrderIdealView,
    PosetError,
    RankGap,
    SimplicialPoset,
    from_simplices,
    order_complex,
    product,
)

__all__ = [
    "BadSubset", "Field", "GF2", "KERNEL", "LinkView", "NoBottom", "NonBoolean", "OrderIdealView",
    "PosetError", "QQ", "RankGap", "SimplicialPoset", "dump", "from_simplices", "load", "order_complex",
    "product", "to_json", "validate",
]
__version__ = "0.1.0"
