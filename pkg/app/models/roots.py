"""
Root systems and folding maps
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from app.core.exceptions import LatticeMismatchError
from app.models.group import GroupElement, Subgroup
from app.models.lattice import LatticeVector
from app.models.mckay import McKayQuiver
from app.models.quiver import MonomialAction, OrbitData


@dataclass(frozen=True)
class RealRoot:
    """
    Positive real root with a Weyl word: applying the reflections of
    `word` in order to the simple root `simple` reproduces `vector`
    """

    vector: LatticeVector
    simple: str
    word: Tuple[str, ...] = ()


@dataclass(frozen=True)
class ImaginaryRoot:
    """Positive imaginary root; `word` carries `ancestor` (in the fundamental set) to it"""

    vector: LatticeVector
    ancestor: LatticeVector
    word: Tuple[str, ...] = ()


def root_order(v: LatticeVector) -> Tuple[int, Tuple[int, ...]]:
    return (v.height, tuple(-a for a in v.coefficients))


@dataclass
class RootSystemView:
    index: Tuple[str, ...]
    height_bound: Optional[int]
    real: Tuple[RealRoot, ...]
    imaginary: Tuple[ImaginaryRoot, ...] = ()
    finite: bool = False
    complete: bool = False
    _lookup: Dict[Tuple[int, ...], object] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for r in self.real:
            self._lookup[r.vector.coefficients] = r
        for r in self.imaginary:
            self._lookup[r.vector.coefficients] = r

    @property
    def positive_roots(self) -> List[LatticeVector]:
        """Real and imaginary positive roots, by height then coefficients"""
        vectors = [r.vector for r in self.real] + [r.vector for r in self.imaginary]
        return sorted(vectors, key=root_order)

    @property
    def real_vectors(self) -> List[LatticeVector]:
        return [r.vector for r in self.real]

    def __len__(self) -> int:
        return len(self.real) + len(self.imaginary)

    def __contains__(self, v: LatticeVector) -> bool:
        if v.index != self.index:
            return False
        return v.coefficients in self._lookup

    def is_real(self, v: LatticeVector) -> bool:
        return isinstance(self._lookup.get(v.coefficients), RealRoot)

    def root(self, v: LatticeVector):
        return self._lookup.get(v.coefficients)

    def max_height(self) -> int:
        return max((v.height for v in self.positive_roots), default=0)


class FoldingMaps:
    """
    Evaluators between the lattices of Q, Gamma and Q-hat

    f sends G-fixed vectors of ZI to ZR (value at each representative),
    sigma sums the coset translates of a vector over its stabilizer,
    pi = f o sigma, and h sums the character coordinates of each fiber.
    """

    def __init__(self, action: MonomialAction, orbit_data: OrbitData, mckay: McKayQuiver):
        self.action = action
        self.orbit_data = orbit_data
        self.mckay = mckay
        self.index_Q: Tuple[str, ...] = tuple(action.quiver.vertices)
        self.index_Gamma: Tuple[str, ...] = tuple(orbit_data.representatives)
        self.index_hat: Tuple[str, ...] = tuple(mckay.quiver.vertices)

    def _expect(self, v: LatticeVector, index: Tuple[str, ...], name: str) -> None:
        if v.index != index:
            raise LatticeMismatchError(f"Vector does not live on the {name} lattice")

    def act(self, g: GroupElement, v: LatticeVector) -> LatticeVector:
        """(g.v)_{g(i)} = v_i on ZI"""
        self._expect(v, self.index_Q, "Q")
        values = {self.action.act_vertex(g, i): a for i, a in zip(v.index, v.coefficients)}
        return LatticeVector.from_mapping(self.index_Q, values)

    def act_hat(self, g: GroupElement, v: LatticeVector) -> LatticeVector:
        """Induced action on Z I-hat"""
        self._expect(v, self.index_hat, "Q-hat")
        induced = self.mckay.induced
        if induced is None:
            raise LatticeMismatchError("McKay quiver has no induced action")
        values = {induced.act_vertex(g, i): a for i, a in zip(v.index, v.coefficients)}
        return LatticeVector.from_mapping(self.index_hat, values)

    def is_fixed(self, v: LatticeVector) -> bool:
        self._expect(v, self.index_Q, "Q")
        orbit_of = self.orbit_data.orbit_of
        return all(v[i] == v[orbit_of[i]] for i in self.index_Q)

    def f(self, v: LatticeVector) -> LatticeVector:
        if not self.is_fixed(v):
            raise LatticeMismatchError(f"{v} is not fixed by G")
        return LatticeVector(self.index_Gamma, tuple(v[r] for r in self.index_Gamma))

    def f_inverse(self, w: LatticeVector) -> LatticeVector:
        self._expect(w, self.index_Gamma, "Gamma")
        orbit_of = self.orbit_data.orbit_of
        return LatticeVector(self.index_Q, tuple(w[orbit_of[i]] for i in self.index_Q))

    def stabilizer(self, v: LatticeVector) -> Subgroup:
        """H_v = {g : g.v = v}"""
        group = self.action.group
        return Subgroup(group, [g for g in group.elements() if self.act(g, v) == v])

    def sigma(self, v: LatticeVector) -> LatticeVector:
        total = LatticeVector.zero(self.index_Q)
        for g in self.stabilizer(v).coset_representatives():
            total = total + self.act(g, v)
        return total

    def pi(self, v: LatticeVector) -> LatticeVector:
        return self.f(self.sigma(v))

    def h(self, beta: LatticeVector) -> LatticeVector:
        self._expect(beta, self.index_hat, "Q-hat")
        return LatticeVector(self.index_Gamma, tuple(
            sum(beta[name] for name in self.mckay.fiber(r)) for r in self.index_Gamma
        ))

    def orbit_hat(self, beta: LatticeVector) -> List[LatticeVector]:
        """Distinct translates of beta under the induced action"""
        seen: Dict[Tuple[int, ...], LatticeVector] = {}
        for g in self.action.group.elements():
            image = self.act_hat(g, beta)
            seen.setdefault(image.coefficients, image)
        return list(seen.values())
