"""
Quivers, paths and monomial group actions
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from app.core.exceptions import InvalidQuiverError, UnknownArrowError
from app.models.group import AbelianGroup, GroupElement, Subgroup


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    """
    Path of a quiver; arrows are listed right to left like composition,
    so Path(i, k, (b, a)) is a: i -> j followed by b: j -> k.
    Length 0 is the vertex idempotent e_i.
    """

    source: str
    target: str
    arrows: Tuple[str, ...] = ()

    @classmethod
    def trivial(cls, vertex: str) -> "Path":
        return cls(vertex, vertex, ())

    @property
    def length(self) -> int:
        return len(self.arrows)

    def after(self, other: "Path") -> Optional["Path"]:
        """self * other, or None when other does not end where self starts"""
        if other.target != self.source:
            return None
        return Path(other.source, self.target, self.arrows + other.arrows)

    def __str__(self) -> str:
        if not self.arrows:
            return f"e_{self.source}"
        return "".join(self.arrows)


class Quiver:
    """
    Finite quiver with named vertices and arrows

    Loops are representable so that validation can report them; every
    construction that needs a loop-free quiver checks loops() itself.
    """

    def __init__(self, vertices: Iterable[str], arrows: Iterable[Arrow]):
        self.vertices: Tuple[str, ...] = tuple(vertices)
        self.arrows: Tuple[Arrow, ...] = tuple(arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidQuiverError(f"Duplicate vertex names in {self.vertices}")
        self.index: Dict[str, int] = {v: k for k, v in enumerate(self.vertices)}

        self._arrows: Dict[str, Arrow] = {}
        for a in self.arrows:
            if a.id in self._arrows:
                raise InvalidQuiverError(f"Duplicate arrow id: {a.id}")
            if a.source not in self.index or a.target not in self.index:
                raise InvalidQuiverError(f"Arrow {a.id} has an endpoint outside the vertex set")
            self._arrows[a.id] = a

    @property
    def arrow_ids(self) -> Tuple[str, ...]:
        return tuple(a.id for a in self.arrows)

    def arrow(self, arrow_id: str) -> Arrow:
        try:
            return self._arrows[arrow_id]
        except KeyError:
            raise UnknownArrowError(f"Unknown arrow id: {arrow_id}") from None

    def has_arrow(self, arrow_id: str) -> bool:
        return arrow_id in self._arrows

    def loops(self) -> List[Arrow]:
        return [a for a in self.arrows if a.source == a.target]

    def arrows_between(self, source: str, target: str) -> List[Arrow]:
        return [a for a in self.arrows if a.source == source and a.target == target]

    def edge_count(self, i: str, j: str) -> int:
        """Number of arrows joining i and j in either direction"""
        if i == j:
            return 2 * len(self.arrows_between(i, i))
        return len(self.arrows_between(i, j)) + len(self.arrows_between(j, i))

    def incoming(self, vertex: str) -> List[Arrow]:
        return [a for a in self.arrows if a.target == vertex]

    def outgoing(self, vertex: str) -> List[Arrow]:
        return [a for a in self.arrows if a.source == vertex]

    def neighbors(self, vertex: str) -> List[str]:
        """Adjacent vertices in vertex order"""
        adjacent = {a.target for a in self.outgoing(vertex)} | {a.source for a in self.incoming(vertex)}
        adjacent.discard(vertex)
        return sorted(adjacent, key=self.index.__getitem__)

    def is_sink(self, vertex: str) -> bool:
        return not self.outgoing(vertex)

    def is_source(self, vertex: str) -> bool:
        return not self.incoming(vertex)

    def reflected_at(self, vertex: str) -> "Quiver":
        """The quiver with every arrow at vertex reversed"""
        arrows = [
            Arrow(a.id, a.target, a.source) if vertex in (a.source, a.target) else a
            for a in self.arrows
        ]
        return Quiver(self.vertices, arrows)

    def full_subquiver(self, vertices: Iterable[str]) -> "Quiver":
        keep = set(vertices)
        return Quiver(
            [v for v in self.vertices if v in keep],
            [a for a in self.arrows if a.source in keep and a.target in keep],
        )

    def underlying_graph(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for a in self.arrows:
            graph.add_edge(a.source, a.target, key=a.id)
        return graph

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for a in self.arrows:
            graph.add_edge(a.source, a.target, key=a.id)
        return graph

    def connected_components(self) -> List[Tuple[str, ...]]:
        """Components in order of their first vertex, vertices in quiver order"""
        components = [
            tuple(sorted(c, key=self.index.__getitem__))
            for c in nx.connected_components(self.underlying_graph())
        ]
        return sorted(components, key=lambda c: self.index[c[0]])

    def __repr__(self) -> str:
        return f"Quiver(vertices={len(self.vertices)}, arrows={len(self.arrows)})"


@dataclass(frozen=True)
class GeneratorAction:
    """Action of one group generator: vertex permutation and scaled arrow map"""

    vertex_perm: Mapping[str, str]
    arrow_map: Mapping[str, Tuple[str, int]]


@dataclass(frozen=True)
class ElementAction:
    vertex_perm: Mapping[str, str]
    arrow_map: Mapping[str, Tuple[str, int]]

    def compose(self, other: "ElementAction", level: int) -> "ElementAction":
        """self after other"""
        arrow_map = {}
        for arrow_id, (middle, k) in other.arrow_map.items():
            image, k2 = self.arrow_map[middle]
            arrow_map[arrow_id] = (image, (k + k2) % level)
        vertex_perm = {v: self.vertex_perm[w] for v, w in other.vertex_perm.items()}
        return ElementAction(vertex_perm, arrow_map)

    @property
    def is_identity(self) -> bool:
        return all(v == w for v, w in self.vertex_perm.items()) and all(
            a == b and k == 0 for a, (b, k) in self.arrow_map.items()
        )


class MonomialAction:
    """
    Action of a finite abelian group on kQ by vertex permutations and
    arrow maps alpha -> zeta_L^k * beta, given on the factor generators
    """

    def __init__(
        self,
        quiver: Quiver,
        group: AbelianGroup,
        generators: Sequence[GeneratorAction],
        level: Optional[int] = None,
    ):
        if len(generators) != group.rank:
            raise InvalidQuiverError(
                f"Expected {group.rank} generator actions, got {len(generators)}"
            )
        self.quiver = quiver
        self.group = group
        self.generators: Tuple[GeneratorAction, ...] = tuple(generators)
        self.level = level if level is not None else group.exponent
        if self.level % group.exponent:
            raise InvalidQuiverError(
                f"Level {self.level} is not a multiple of the group exponent {group.exponent}"
            )
        self._cache: Dict[Tuple[int, ...], ElementAction] = {}

    def identity_action(self) -> ElementAction:
        return ElementAction(
            {v: v for v in self.quiver.vertices},
            {a: (a, 0) for a in self.quiver.arrow_ids},
        )

    def generator_action(self, j: int) -> ElementAction:
        gen = self.generators[j]
        return ElementAction(dict(gen.vertex_perm), {a: (b, k % self.level) for a, (b, k) in gen.arrow_map.items()})

    def element_action(self, g: GroupElement) -> ElementAction:
        """Action of g = prod g_j^{t_j} composed from the generators"""
        if g.exponents in self._cache:
            return self._cache[g.exponents]
        result = self.identity_action()
        for j, t in enumerate(g.exponents):
            step = self.generator_action(j)
            for _ in range(t):
                result = step.compose(result, self.level)
        self._cache[g.exponents] = result
        return result

    def act(self, g: GroupElement, arrow_id: str) -> Tuple[str, int]:
        if not self.quiver.has_arrow(arrow_id):
            raise UnknownArrowError(f"Unknown arrow id: {arrow_id}")
        return self.element_action(g).arrow_map[arrow_id]

    def act_vertex(self, g: GroupElement, vertex: str) -> str:
        return self.element_action(g).vertex_perm[vertex]

    def act_path(self, g: GroupElement, path: Path) -> Tuple[Path, int]:
        action = self.element_action(g)
        total = 0
        images = []
        for arrow_id in path.arrows:
            image, k = action.arrow_map[arrow_id]
            images.append(image)
            total += k
        moved = Path(action.vertex_perm[path.source], action.vertex_perm[path.target], tuple(images))
        return moved, total % self.level

    def vertex_permutations(self) -> List[Dict[str, str]]:
        """Vertex permutation of every group element, in element order"""
        return [dict(self.element_action(g).vertex_perm) for g in self.group.elements()]

    def __repr__(self) -> str:
        return f"MonomialAction(group={self.group}, level={self.level})"


@dataclass(frozen=True)
class ArrowOrbit:
    representative: str
    members: Tuple[str, ...]
    source_orbit: str
    target_orbit: str


@dataclass
class OrbitData:
    """
    Orbit bookkeeping of an admissible action

    representatives is the ordered set of orbit representatives; every
    vertex i has a transporter kappa with kappa(rep) = i and a stabilizer.
    """

    representatives: Tuple[str, ...]
    orbit_of: Dict[str, str]
    orbits: Dict[str, Tuple[str, ...]]
    transporters: Dict[str, GroupElement]
    stabilizers: Dict[str, Subgroup]
    arrow_orbits: Tuple[ArrowOrbit, ...]
    pair_orbit_representatives: Dict[Tuple[str, str], Tuple[Tuple[str, str], ...]] = field(default_factory=dict)

    def orbit_size(self, rep: str) -> int:
        return len(self.orbits[rep])

    def d(self, rep: str) -> int:
        return self.orbit_size(rep)

    def stabilizer(self, vertex: str) -> Subgroup:
        return self.stabilizers[vertex]
