"""Exact computations in double Burnside rings of small finite groups."""

from .catalog import make_group
from .groups import PermutationGroup, SectionPair

__version__ = "0.1.0"

__all__ = ["make_group", "PermutationGroup", "SectionPair"]
