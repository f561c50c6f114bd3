"""Birational maps of log surface pairs with irreducible boundary."""

from .cluster import ClusterState, PointSpec, WeightedGraph, blow_up, intersection_matrix, total_transform_coeffs
from .factor import (Factorization, Link, MapResolution, build_triangular_resolution, factorize,
                     link_indices, simulate_indices)
from .hj import chain_discrepancies, hj_contract, hj_expand
from .models import ModelPoint, catalog, letter_admissible, same_orbit
from .pairs import Completion, log_discrepancies, validate_dlt, validate_map_constraints
from .words import Iso, Triangular, Word, length, normal_form, reduce

__version__ = "0.1.0"

__all__ = [
    "ClusterState", "PointSpec", "WeightedGraph", "blow_up", "intersection_matrix", "total_transform_coeffs",
    "Factorization", "Link", "MapResolution", "build_triangular_resolution", "factorize", "link_indices",
    "simulate_indices", "chain_discrepancies", "hj_contract", "hj_expand", "ModelPoint", "catalog",
    "letter_admissible", "same_orbit", "Completion", "log_discrepancies", "validate_dlt",
    "validate_map_constraints", "Iso", "Triangular", "Word", "length", "normal_form", "reduce",
]
