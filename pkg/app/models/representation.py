"""
Quiver representations over Q(zeta_L)
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from app.core.exceptions import RepresentationError
from app.models.cyclotomic import CycScalar
from app.models.group import GroupElement
from app.models.lattice import LatticeVector
from app.models.quiver import Quiver


Matrix = Tuple[Tuple[CycScalar, ...], ...]
Morphism = Dict[str, Matrix]


def to_matrix(level: int, rows: Sequence[Sequence], height: int, width: int) -> Matrix:
    matrix = tuple(
        tuple(x if isinstance(x, CycScalar) else CycScalar.rational(level, x) for x in row)
        for row in rows
    )
    if len(matrix) != height or any(len(row) != width for row in matrix):
        raise RepresentationError(f"Expected a {height}x{width} matrix")
    return matrix


def zero_matrix(level: int, height: int, width: int) -> Matrix:
    zero = CycScalar.zero(level)
    return tuple(tuple(zero for _ in range(width)) for _ in range(height))


def identity_matrix(level: int, size: int) -> Matrix:
    one, zero = CycScalar.one(level), CycScalar.zero(level)
    return tuple(tuple(one if r == c else zero for c in range(size)) for r in range(size))


class Representation:
    """
    Vector spaces K^(d_v) at the vertices and matrices at the arrows

    The matrix of an arrow a: i -> j has d_j rows and d_i columns.
    Vertices and arrows left out of the input are zero.
    """

    def __init__(
        self,
        quiver: Quiver,
        level: int,
        dims: Mapping[str, int],
        maps: Optional[Mapping[str, Sequence[Sequence]]] = None,
    ):
        unknown = set(dims) - set(quiver.vertices)
        if unknown:
            raise RepresentationError(f"Dimensions given at unknown vertices {sorted(unknown)}")
        self.quiver = quiver
        self.level = level
        self.dims: Dict[str, int] = {v: int(dims.get(v, 0)) for v in quiver.vertices}
        if any(d < 0 for d in self.dims.values()):
            raise RepresentationError("Negative dimension")
        maps = maps or {}
        self.maps: Dict[str, Matrix] = {}
        for a in quiver.arrows:
            height, width = self.dims[a.target], self.dims[a.source]
            if a.id in maps:
                self.maps[a.id] = to_matrix(level, maps[a.id], height, width)
            else:
                self.maps[a.id] = zero_matrix(level, height, width)
        extra = set(maps) - set(quiver.arrow_ids)
        if extra:
            raise RepresentationError(f"Matrices given for unknown arrows {sorted(extra)}")

    def dimension_vector(self) -> LatticeVector:
        return LatticeVector(self.quiver.vertices, tuple(self.dims[v] for v in self.quiver.vertices))

    @property
    def total_dimension(self) -> int:
        return sum(self.dims.values())

    @property
    def is_zero(self) -> bool:
        return self.total_dimension == 0

    def matrix(self, arrow_id: str) -> Matrix:
        return self.maps[arrow_id]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return (
            self.quiver.vertices == other.quiver.vertices
            and self.quiver.arrow_ids == other.quiver.arrow_ids
            and self.level == other.level
            and self.dims == other.dims
            and self.maps == other.maps
        )

    def __hash__(self) -> int:
        return hash((self.level, tuple(self.dims.items())))

    def to_dict(self) -> Dict:
        """Dimension vector plus row-major matrices of ascending cyclotomic coordinates"""
        return {
            "dims": dict(self.dims),
            "maps": {
                a: [[[str(x) for x in entry.to_vector()] for entry in row] for row in matrix]
                for a, matrix in self.maps.items()
            },
        }

    def __repr__(self) -> str:
        return f"Representation(dim={self.dimension_vector()})"


@dataclass
class TwistData:
    """^gM together with the element g it was twisted by"""

    element: GroupElement
    module: Representation


@dataclass
class IsomorphismResult:
    """
    Outcome of an isomorphism test

    certified is False only when no invertible morphism was found and the
    determinant polynomial could not rule one out.
    """

    isomorphic: bool
    certified: bool
    method: str
    witness: Optional[Morphism] = None
    hom_dimension: int = 0
    notes: List[str] = field(default_factory=list)
