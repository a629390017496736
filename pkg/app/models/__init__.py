"""
Domain models module
"""

from app.models.cartan import CartanMatrix, TypeClassification, ValuedGraphData
from app.models.cyclotomic import CycScalar
from app.models.group import AbelianGroup, Character, GroupElement, Subgroup
from app.models.lattice import BilinearForm, LatticeVector
from app.models.mckay import McKayQuiver
from app.models.quiver import Arrow, MonomialAction, OrbitData, Quiver
from app.models.representation import Representation

__all__ = [
    "AbelianGroup", "Arrow", "BilinearForm", "CartanMatrix", "Character", "CycScalar",
    "GroupElement", "LatticeVector", "McKayQuiver", "MonomialAction", "OrbitData",
    "Quiver", "Representation", "Subgroup", "TypeClassification", "ValuedGraphData",
]
