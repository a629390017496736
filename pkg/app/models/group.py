"""
Finite abelian groups

Groups are products of cyclic factors Z/m_1 x ... x Z/m_n with the
factor basis stored explicitly. Elements and characters are exponent
vectors; character values are exponents of a primitive L-th root of unity.
"""

from dataclasses import dataclass
from itertools import product
from math import gcd, prod
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import sympy

from app.core.exceptions import GroupMismatchError, NotASubgroupError
from app.utils.linalg import smith_normal_form


def lcm_all(values: Iterable[int]) -> int:
    result = 1
    for v in values:
        result = result * v // gcd(result, v)
    return result


@dataclass(frozen=True)
class AbelianGroup:
    """Product of cyclic groups of the given orders"""

    orders: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(m) for m in self.orders))
        if any(m < 1 for m in self.orders):
            raise ValueError(f"Cyclic factor orders must be positive, got {self.orders}")

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return prod(self.orders)

    @property
    def exponent(self) -> int:
        return lcm_all(self.orders)

    def element(self, exponents: Sequence[int]) -> "GroupElement":
        if len(exponents) != self.rank:
            raise GroupMismatchError(
                f"Element of length {len(exponents)} does not fit group of rank {self.rank}"
            )
        return GroupElement(self, tuple(int(t) % m for t, m in zip(exponents, self.orders)))

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def generators(self) -> List["GroupElement"]:
        return [
            self.element(tuple(1 if k == j else 0 for k in range(self.rank)))
            for j in range(self.rank)
        ]

    def elements(self) -> List["GroupElement"]:
        """All elements in lexicographic exponent order"""
        return [GroupElement(self, exps) for exps in product(*(range(m) for m in self.orders))]

    def character(self, exponents: Sequence[int]) -> "Character":
        element = self.element(exponents)
        return Character(self, element.exponents)

    def characters(self) -> List["Character"]:
        """All characters, trivial first, lexicographic exponent order"""
        return [Character(self, g.exponents) for g in self.elements()]

    def __str__(self) -> str:
        if not self.orders:
            return "1"
        return " x ".join(f"Z/{m}" for m in self.orders)


@dataclass(frozen=True)
class GroupElement:
    """g_1^{t_1} ... g_n^{t_n} with 0 <= t_i < m_i"""

    group: AbelianGroup
    exponents: Tuple[int, ...]

    def _check(self, other: "GroupElement") -> None:
        if self.group != other.group:
            raise GroupMismatchError(f"Elements of {self.group} and {other.group} cannot be combined")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element([a + b for a, b in zip(self.exponents, other.exponents)])

    def __pow__(self, k: int) -> "GroupElement":
        return self.group.element([t * k for t in self.exponents])

    def inverse(self) -> "GroupElement":
        return self ** -1

    @property
    def is_identity(self) -> bool:
        return not any(self.exponents)

    def order(self) -> int:
        return lcm_all(m // gcd(m, t) for t, m in zip(self.exponents, self.group.orders))

    def __lt__(self, other: "GroupElement") -> bool:
        return self.exponents < other.exponents

    def __str__(self) -> str:
        if self.is_identity:
            return "e"
        return "*".join(
            f"g{j + 1}^{t}" if t != 1 else f"g{j + 1}"
            for j, t in enumerate(self.exponents)
            if t
        )


@dataclass(frozen=True)
class Character:
    """
    Linear character chi_s(g) = prod_i xi_i^{s_i t_i}, xi_i = zeta_L^{L/m_i}
    """

    group: AbelianGroup
    exponents: Tuple[int, ...]

    def value(self, g: GroupElement, level: Optional[int] = None) -> int:
        """
        Exponent k with chi(g) = zeta_level^k

        Args:
            g: Element of the same group
            level: Cyclotomic level, a multiple of the group exponent

        Returns:
            k modulo level
        """
        if g.group != self.group:
            raise GroupMismatchError(f"Character of {self.group} evaluated on element of {g.group}")
        L = self.group.exponent if level is None else level
        if L % self.group.exponent:
            raise GroupMismatchError(f"Level {L} is not a multiple of exponent {self.group.exponent}")
        return sum(s * t * (L // m) for s, t, m in zip(self.exponents, g.exponents, self.group.orders)) % L

    def __mul__(self, other: "Character") -> "Character":
        if self.group != other.group:
            raise GroupMismatchError("Characters of different groups cannot be multiplied")
        return self.group.character([a + b for a, b in zip(self.exponents, other.exponents)])

    def conjugate(self) -> "Character":
        return self.group.character([-s for s in self.exponents])

    @property
    def is_trivial(self) -> bool:
        return not any(self.exponents)

    @property
    def label(self) -> str:
        return ",".join(str(s) for s in self.exponents)

    def __lt__(self, other: "Character") -> bool:
        return self.exponents < other.exponents


GroupLike = Union[GroupElement, Sequence[int]]


class Subgroup:
    """
    Subgroup of an AbelianGroup given by generators

    The subgroup carries a canonical basis b_1, ..., b_k with orders
    d_1, ..., d_k so that H = <b_1> x ... x <b_k>. When H splits along the
    ambient factor basis the basis is coordinate aligned (b_j a power of
    g_j); otherwise it comes from Smith normal forms of the preimage lattice.
    """

    def __init__(self, ambient: AbelianGroup, generators: Iterable[GroupLike] = ()):
        self.ambient = ambient
        self.generators: Tuple[GroupElement, ...] = tuple(
            g if isinstance(g, GroupElement) else ambient.element(g) for g in generators
        )
        for g in self.generators:
            if g.group != ambient:
                raise GroupMismatchError(f"Generator {g} does not belong to {ambient}")

        self._elements = self._closure()
        self.basis, self.invariants = self._canonical_basis()
        self.abstract = AbelianGroup(self.invariants)
        self._coordinates: Dict[Tuple[int, ...], GroupElement] = {}
        for coords in self.abstract.elements():
            image = ambient.identity()
            for b, c in zip(self.basis, coords.exponents):
                image = image * (b ** c)
            self._coordinates[image.exponents] = coords
        if len(self._coordinates) != len(self._elements):
            raise ValueError(f"Canonical basis of subgroup does not match its closure in {ambient}")

    def _closure(self) -> Tuple[GroupElement, ...]:
        seen = {self.ambient.identity().exponents}
        frontier = [self.ambient.identity()]
        while frontier:
            nxt = []
            for h in frontier:
                for g in self.generators:
                    k = h * g
                    if k.exponents not in seen:
                        seen.add(k.exponents)
                        nxt.append(k)
            frontier = nxt
        return tuple(sorted(GroupElement(self.ambient, e) for e in seen))

    def _canonical_basis(self) -> Tuple[Tuple[GroupElement, ...], Tuple[int, ...]]:
        members = {g.exponents for g in self._elements}

        # coordinate-aligned product of H ∩ <g_j>
        aligned = []
        for g in self.ambient.generators():
            power = next(
                (k for k in range(1, g.order() + 1) if (g ** k).exponents in members),
            )
            size = g.order() // power
            if size > 1:
                aligned.append((g ** power, size))
        if prod(size for _, size in aligned) == len(members):
            return tuple(b for b, _ in aligned), tuple(s for _, s in aligned)

        n = self.ambient.rank
        relations = [list(g.exponents) for g in self.generators]
        relations += [[m if i == j else 0 for j in range(n)] for i, m in enumerate(self.ambient.orders)]
        _, D, V = smith_normal_form(relations)
        lattice = sympy.Matrix([[D[i][i] if i == j else 0 for j in range(n)] for i in range(n)]) * sympy.Matrix(V).inv()
        quotient = sympy.diag(*self.ambient.orders) * lattice.inv()
        _, Dq, Vq = smith_normal_form(quotient.tolist())
        rows = (sympy.Matrix(Vq).inv() * lattice).tolist()

        basis, invariants = [], []
        for k in range(n):
            d = Dq[k][k]
            if d > 1:
                basis.append(self.ambient.element([int(x) for x in rows[k]]))
                invariants.append(d)
        return tuple(basis), tuple(invariants)

    @property
    def order(self) -> int:
        return len(self._elements)

    @property
    def index(self) -> int:
        return self.ambient.order // self.order

    @property
    def exponent(self) -> int:
        return self.abstract.exponent

    def elements(self) -> Tuple[GroupElement, ...]:
        return self._elements

    def __contains__(self, g: GroupLike) -> bool:
        exps = g.exponents if isinstance(g, GroupElement) else self.ambient.element(g).exponents
        return exps in self._coordinates

    def coordinates(self, g: GroupElement) -> GroupElement:
        """Element of the abstract group corresponding to g"""
        if g.group != self.ambient:
            raise GroupMismatchError(f"{g} is not an element of {self.ambient}")
        try:
            return self._coordinates[g.exponents]
        except KeyError:
            raise NotASubgroupError(f"{g} is not a member of the subgroup") from None

    def from_coordinates(self, coords: GroupElement) -> GroupElement:
        image = self.ambient.identity()
        for b, c in zip(self.basis, coords.exponents):
            image = image * (b ** c)
        return image

    def evaluate(self, character: Character, h: GroupElement, level: int) -> int:
        """Exponent at the given level of a subgroup character on a member h"""
        if character.group != self.abstract:
            raise GroupMismatchError("Character does not belong to this subgroup")
        return character.value(self.coordinates(h), level)

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self.ambient == other.ambient and all(h in other for h in self._elements)

    def intersection(self, other: "Subgroup") -> "Subgroup":
        if self.ambient != other.ambient:
            raise GroupMismatchError("Subgroups of different groups cannot be intersected")
        return Subgroup(self.ambient, [h for h in self._elements if h in other])

    def coset_representatives(self) -> List[GroupElement]:
        """Lexicographically smallest element of each coset, in order"""
        covered = set()
        reps = []
        for g in self.ambient.elements():
            if g.exponents in covered:
                continue
            reps.append(g)
            covered.update((g * h).exponents for h in self._elements)
        return reps

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.ambient == other.ambient and self._elements == other._elements

    def __hash__(self) -> int:
        return hash((self.ambient, self._elements))

    def __repr__(self) -> str:
        gens = ", ".join(str(b) for b in self.basis) or "e"
        return f"Subgroup(<{gens}> of order {self.order} in {self.ambient})"


def whole_group(group: AbelianGroup) -> Subgroup:
    return Subgroup(group, group.generators())
