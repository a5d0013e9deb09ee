"""Exact geometry of the universal quasiconformal trees T^{m,a}."""

from __future__ import annotations

from .core import DomainError, GeometricTail, PointCode, Weight, canonicalize, code, delta, word
from .dimension import dimension_bound_infinity, halving_weight, moran_dimension
from .gluing import (
    FiniteGeodesicTree,
    GluingSpec,
    branch_heights,
    doubling_bound,
    geodesic_glue,
    step1_uniform_growth,
    step2_uniform_valence,
    step3_attach,
    tree_distance,
    verify_tree_properties,
)
from .graphs import adjacent, arc, neighbors, verify_tree_structure
from .metric import boundary_distance, chain_length, distance_exact
from .structure import branch_points, hausdorff_nesting, tiles, verify_separation, verify_uniform_branching

__all__ = [
    "DomainError", "GeometricTail", "PointCode", "Weight", "canonicalize", "code", "delta", "word",
    "dimension_bound_infinity", "halving_weight", "moran_dimension",
    "FiniteGeodesicTree", "GluingSpec", "branch_heights", "doubling_bound", "geodesic_glue",
    "step1_uniform_growth", "step2_uniform_valence", "step3_attach", "tree_distance",
    "verify_tree_properties",
    "adjacent", "arc", "neighbors", "verify_tree_structure",
    "boundary_distance", "chain_length", "distance_exact",
    "branch_points", "hausdorff_nesting", "tiles", "verify_separation", "verify_uniform_branching",
]
