"""Exact mod-p polynomial algebra and a verification harness built on it."""

from .conductor import Representation, generic_decomposition, represent
from .morphism import Coaction, NotInvariant, RingMorphism, fixed_space
from .nagata import NagataFamily, classic_family
from .rank3 import Rank3Family, hand_example
from .ring import AmbientMismatch, MultiPoly, NotDivisible, VarTable, substitute

__version__ = "0.1.0"

__all__ = [
    "AmbientMismatch",
    "Coaction",
    "MultiPoly",
    "NagataFamily",
    "NotDivisible",
    "NotInvariant",
    "Rank3Family",
    "Representation",
    "RingMorphism",
    "VarTable",
    "classic_family",
    "fixed_space",
    "generic_decomposition",
    "hand_example",
    "represent",
    "substitute",
    "__version__",
]
