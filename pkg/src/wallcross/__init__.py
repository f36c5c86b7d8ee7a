"""Exact wall-crossing computations for quiver moduli and rank-one curve counting."""
from .quiver import (DimVector, InputError, PreconditionError, Quiver, canonical_character,
                     detect_trivial_type, dual_quiver, euler_pairing, expected_stable_dim,
                     is_strongly_connected, is_symmetric, support_subquiver)
from .stability import (CentralCharge, Gaussian, Wall, enumerate_walls, flop_charges, on_wall,
                        star_charges, wall_count, wall_side)
from .simples import Certificate, SimpleVerdict, has_simple
from .classifier import (DiagramClass, ExtendedQuiverSpec, Kind, build_extended, chi_from_ext,
                         classify_extended_flip, classify_symmetric_flop, classify_two_vertex,
                         grassmannian_model_dims, is_strict_sufficient, local_model_dims)

__version__ = "0.1.0"

__all__ = [
    "DimVector",
    "InputError",
    "PreconditionError",
    "Quiver",
    "canonical_character",
    "detect_trivial_type",
    "dual_quiver",
    "euler_pairing",
    "expected_stable_dim",
    "is_strongly_connected",
    "is_symmetric",
    "support_subquiver",
    "CentralCharge",
    "Gaussian",
    "Wall",
    "enumerate_walls",
    "flop_charges",
    "on_wall",
    "star_charges",
    "wall_count",
    "wall_side",
    "Certificate",
    "SimpleVerdict",
    "has_simple",
    "DiagramClass",
    "ExtendedQuiverSpec",
    "Kind",
    "build_extended",
    "chi_from_ext",
    "classify_extended_flip",
    "classify_symmetric_flop",
    "classify_two_vertex",
    "grassmannian_model_dims",
    "is_strict_sufficient",
    "local_model_dims",
]
