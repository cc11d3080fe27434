"""Certification and search toolkit for disk packings of bounded kissing
radius: exact-leaning planar predicates, the parent-tree/region pipeline,
small-circumradius Delaunay complexes, sparse-centered boundary curves,
and the resulting count certificate."""

from .pipeline import CertReport, GenerationTimeout, certify, hex_packing
from .curves import SparseCurve, min_curve_search, validate_curve
from .packing import PackingInstance, kissing_profile, validate_packing
from .search import optimize

__all__ = [
    "CertReport",
    "GenerationTimeout",
    "PackingInstance",
    "SparseCurve",
    "certify",
    "hex_packing",
    "kissing_profile",
    "min_curve_search",
    "optimize",
    "validate_curve",
    "validate_packing",
]

__version__ = "0.1.0"
