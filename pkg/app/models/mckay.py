"""
Generalized McKay quiver data
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from app.models.group import Character, GroupElement
from app.models.quiver import MonomialAction, OrbitData, Quiver
from app.models.skew import SkewElement


@dataclass(frozen=True)
class McKayVertex:
    """Vertex (i, chi) of Q-hat: an orbit representative and a character of its stabilizer"""

    name: str
    base: str
    character: Character


@dataclass(frozen=True)
class ArrowProvenance:
    """
    Where a Q-hat arrow comes from: the representative arrow of a Q-arrow
    orbit, the transporter kappa of its source, and the matched characters
    """

    orbit_representative: str
    transporter: GroupElement
    rho: Character
    sigma: Character


@dataclass
class McKayQuiver:
    quiver: Quiver
    vertices: Dict[str, McKayVertex]
    provenance: Dict[str, ArrowProvenance]
    basis: Dict[str, SkewElement]
    source_quiver: Quiver
    source_action: MonomialAction
    orbit_data: OrbitData
    induced: Optional[MonomialAction] = None

    @property
    def level(self) -> int:
        return self.source_action.level

    @property
    def group(self):
        return self.source_action.group

    def vertex_name(self, base: str, character: Character) -> str:
        for v in self.vertices.values():
            if v.base == base and v.character == character:
                return v.name
        raise KeyError(f"No vertex over {base} with character {character.label}")

    def fiber(self, base: str) -> List[str]:
        """Vertices (base, chi) in character order"""
        return [v.name for v in self.vertices.values() if v.base == base]

    def base_of(self, name: str) -> str:
        return self.vertices[name].base


@dataclass
class QuiverIsomorphism:
    """Explicit isomorphism between two quivers, or a failed search"""

    found: bool
    vertex_map: Dict[str, str] = field(default_factory=dict)
    arrow_map: Dict[str, str] = field(default_factory=dict)
    profile: Dict[str, List[Tuple[int, int, int]]] = field(default_factory=dict)
    relaxed: bool = False
