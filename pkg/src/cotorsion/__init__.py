"""Cotorsion pairs, induced model-structure axioms and stable categories
for finite-dimensional monomial quiver algebras over prime fields."""

__version__ = "0.1.0"

from .budgets import UNDECIDED, Budget
from .linalg import FieldSpec
from .quivers import Algebra, Arrow, MalformedRelation, NotAdmissible, Quiver, build_algebra
from .modules import (
    Conflation,
    Module,
    Morphism,
    Subcat,
    decompose,
    direct_sum,
    enumerate_indecomposables,
    hom_basis,
    in_add,
    is_isomorphic,
    kernel,
    cokernel,
    projective_module,
    simple_module,
    zero_module,
)

__all__ = [
    "UNDECIDED",
    "Budget",
    "FieldSpec",
    "Algebra",
    "Arrow",
    "MalformedRelation",
    "NotAdmissible",
    "Quiver",
    "build_algebra",
    "Conflation",
    "Module",
    "Morphism",
    "Subcat",
    "decompose",
    "direct_sum",
    "enumerate_indecomposables",
    "hom_basis",
    "in_add",
    "is_isomorphic",
    "kernel",
    "cokernel",
    "projective_module",
    "simple_module",
    "zero_module",
    "__version__",
]
