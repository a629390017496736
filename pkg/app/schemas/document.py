"""
Input document schema

A document describes a quiver, a finite abelian group given by cyclic
factor orders, and a monomial action given on the factor generators.
Arrow scalars are roots of unity zeta^(scalar_num) at level scalar_den.
"""

from math import gcd
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from app.core.exceptions import DocumentError
from app.models.group import AbelianGroup, lcm_all
from app.models.quiver import Arrow, GeneratorAction, MonomialAction, Quiver


class ArrowSpec(BaseModel):
    """Schema for one arrow"""
    model_config = ConfigDict(populate_by_name=True)

    id: str = Field(..., min_length=1)
    src: str = Field(..., min_length=1)
    tgt: str = Field(..., min_length=1)


class QuiverSpec(BaseModel):
    """Schema for a quiver"""

    vertices: List[str] = Field(..., min_length=1)
    arrows: List[ArrowSpec] = Field(default_factory=list)

    @model_validator(mode='after')
    def validate_references(self):
        """Validate that names are unique and arrows join known vertices"""
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex names must be unique")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise ValueError("arrow ids must be unique")
        known = set(self.vertices)
        for a in self.arrows:
            if a.src not in known or a.tgt not in known:
                raise ValueError(f"arrow {a.id} joins an unknown vertex")
        return self


class GroupSpec(BaseModel):
    """Schema for a finite abelian group as a product of cyclic factors"""

    orders: List[int] = Field(..., min_length=1)

    @field_validator('orders')
    @classmethod
    def validate_orders(cls, v: List[int]) -> List[int]:
        if any(m < 1 for m in v):
            raise ValueError("cyclic factor orders must be positive")
        return v


class ArrowImage(BaseModel):
    """Image zeta^(scalar_num) at level scalar_den times the arrow `to`"""

    to: str = Field(..., min_length=1)
    scalar_num: int = 0
    scalar_den: int = Field(1, ge=1)


class GeneratorSpec(BaseModel):
    vertex_perm: Dict[str, str]
    arrows: Dict[str, ArrowImage] = Field(default_factory=dict)


class ActionSpec(BaseModel):
    generators: List[GeneratorSpec]


class InputDocument(BaseModel):
    """Schema for a (quiver, group, action) document"""

    name: str = ""
    quiver: QuiverSpec
    group: GroupSpec
    action: ActionSpec

    @model_validator(mode='after')
    def validate_action(self):
        """Validate generator count, vertex bijections and arrow references"""
        if len(self.action.generators) != len(self.group.orders):
            raise ValueError(
                f"expected {len(self.group.orders)} generators, got {len(self.action.generators)}"
            )
        vertices = set(self.quiver.vertices)
        arrow_ids = {a.id for a in self.quiver.arrows}
        for idx, gen in enumerate(self.action.generators):
            if set(gen.vertex_perm) != vertices:
                raise ValueError(f"generator {idx}: vertex_perm must list every vertex exactly once")
            images = list(gen.vertex_perm.values())
            if set(images) != vertices or len(images) != len(vertices):
                raise ValueError(f"generator {idx}: vertex_perm is not a bijection")
            if set(gen.arrows) != arrow_ids:
                raise ValueError(f"generator {idx}: arrows must list every arrow exactly once")
            for arrow_id, image in gen.arrows.items():
                if image.to not in arrow_ids:
                    raise ValueError(f"generator {idx}: arrow {arrow_id} is sent to unknown arrow {image.to}")
        return self

    @property
    def level(self) -> int:
        """Common level L of the group exponent and every scalar"""
        dens = [img.scalar_den for gen in self.action.generators for img in gen.arrows.values()]
        return lcm_all(list(self.group.orders) + dens)

    def to_quiver(self) -> Quiver:
        return Quiver(
            self.quiver.vertices,
            [Arrow(a.id, a.src, a.tgt) for a in self.quiver.arrows],
        )

    def to_action(self, quiver: Optional[Quiver] = None) -> MonomialAction:
        quiver = quiver or self.to_quiver()
        L = self.level
        generators = [
            GeneratorAction(
                dict(gen.vertex_perm),
                {
                    a: (img.to, (img.scalar_num * (L // img.scalar_den)) % L)
                    for a, img in gen.arrows.items()
                },
            )
            for gen in self.action.generators
        ]
        return MonomialAction(quiver, AbelianGroup(tuple(self.group.orders)), generators, level=L)

    @classmethod
    def from_models(cls, quiver: Quiver, action: MonomialAction, name: str = "") -> "InputDocument":
        """Serialize with every scalar reduced to lowest terms"""
        L = action.level
        generators = []
        for gen in action.generators:
            arrows = {}
            for a, (b, k) in gen.arrow_map.items():
                k %= L
                g = gcd(k, L)
                arrows[a] = ArrowImage(to=b, scalar_num=k // g, scalar_den=L // g)
            generators.append(GeneratorSpec(vertex_perm=dict(gen.vertex_perm), arrows=arrows))
        return cls(
            name=name,
            quiver=QuiverSpec(
                vertices=list(quiver.vertices),
                arrows=[ArrowSpec(id=a.id, src=a.source, tgt=a.target) for a in quiver.arrows],
            ),
            group=GroupSpec(orders=list(action.group.orders)),
            action=ActionSpec(generators=generators),
        )


def parse_document(source: Union[str, bytes, dict]) -> InputDocument:
    """
    Parse a JSON document (text or already decoded)

    Raises:
        DocumentError: If the document fails schema or reference checks
    """
    try:
        if isinstance(source, dict):
            return InputDocument.model_validate(source)
        return InputDocument.model_validate_json(source)
    except ValidationError as e:
        raise DocumentError(str(e)) from e


def load_document(path: str) -> InputDocument:
    """
    Raises:
        DocumentError: If the file cannot be read or fails validation
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        raise DocumentError(f"Cannot read {path}: {e}") from e
    return parse_document(text)
