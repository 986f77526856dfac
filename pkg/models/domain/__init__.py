# Domain models: group elements, groups, fixed-point data and numerical containers
from .coset import CosetList
from .expansion_coeffs import ExpansionCoeffs
from .fixed_point import EllipticDatum, HyperbolicDatum, ParabolicDatum
from .group import ArithmeticGroup
from .group_element import INFINITY, S, T, GroupElement
from .qexpansion import QExpansion
from .quad_domain import Domain
from .quadform import FormClass, QuadForm

__all__ = [
    "ArithmeticGroup",
    "CosetList",
    "Domain",
    "EllipticDatum",
    "ExpansionCoeffs",
    "FormClass",
    "GroupElement",
    "HyperbolicDatum",
    "INFINITY",
    "ParabolicDatum",
    "QExpansion",
    "QuadForm",
    "S",
    "T",
]
