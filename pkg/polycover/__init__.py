"""Exact lattice-polytope geometry and IDP covering certificates in dimension 3."""

from polycover.errors import PolycoverError
from polycover.lattice import LatticePoint, LinearForm, RationalPoint
from polycover.geometry import convex_hull3, Polytope3

__all__ = [
    "convex_hull3",
    "LatticePoint",
    "LinearForm",
    "PolycoverError",
    "Polytope3",
    "RationalPoint",
]
