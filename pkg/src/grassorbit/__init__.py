"""Exact combinatorics of the torus orbit space of the Grassmannian G(n,2)."""

__version__ = "0.1.0"

from .admissible import AdmissiblePolytope, interior_catalogue
from .arrangement import ChamberComplex, build_complex, locate
from .hypersimplex import Permutation
from .parameters import ParamSpaceDescriptor, actual_descriptor, virtual_descriptor
from .pluecker import StratumSignature, moment_image

__all__ = [
    "AdmissiblePolytope",
    "ChamberComplex",
    "ParamSpaceDescriptor",
    "Permutation",
    "StratumSignature",
    "actual_descriptor",
    "build_complex",
    "interior_catalogue",
    "locate",
    "moment_image",
    "virtual_descriptor",
]
