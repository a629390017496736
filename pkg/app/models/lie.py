"""
Realizations, finite-type Lie algebras and their automorphisms

Algebra elements are sparse vectors {basis index: QQ element}.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from app.core.exceptions import RepresentationError
from app.models.cartan import CartanMatrix
from app.models.group import GroupElement
from app.models.lattice import LatticeVector
from app.utils.linalg import Rat, express_in_rref, rref, to_qq


Vector = Dict[int, Rat]
Dense = List[Rat]


@dataclass(frozen=True)
class Realization:
    """
    (h, {eps_j}, {H_i}) with eps_j(H_i) = c_ij

    Coroots are coordinate vectors of h, roots are linear functionals
    given by their coefficient rows, the center is a basis of
    {H : eps_j(H) = 0 for all j}.
    """

    cartan: CartanMatrix
    dimension: int
    coroots: Tuple[Tuple[Rat, ...], ...]
    roots: Tuple[Tuple[Rat, ...], ...]
    center: Tuple[Tuple[Rat, ...], ...]

    @property
    def rank(self) -> int:
        return 2 * self.cartan.n - self.dimension

    def evaluate(self, functional: Sequence[Rat], H: Sequence[Rat]) -> Rat:
        return sum((to_qq(a) * to_qq(b) for a, b in zip(functional, H)), QQ(0))

    def pairing_matrix(self) -> List[List[Rat]]:
        """[eps_j(H_i)]_ij"""
        return [[self.evaluate(eps, H) for eps in self.roots] for H in self.coroots]


def clean(vector: Vector) -> Vector:
    return {k: v for k, v in vector.items() if v}


def add_into(target: Vector, source: Vector, scale: Rat = QQ(1)) -> None:
    for k, v in source.items():
        value = target.get(k, QQ(0)) + scale * v
        if value:
            target[k] = value
        else:
            target.pop(k, None)


class FiniteLieAlgebra:
    """
    Simply laced finite-type Kac-Moody algebra with exact structure constants

    Basis: coroots h_i (one per vertex), then x_alpha for the positive roots,
    then x_alpha for the negative roots in the same order. Brackets:
    [h_i, x_a] = a(h_i) x_a, [x_a, x_-a] = -h_a and [x_a, x_b] = eps(a, b) x_(a+b)
    when a + b is a root, eps being the bimultiplicative sign on the root
    lattice fixed by an orientation.
    """

    def __init__(
        self,
        cartan: CartanMatrix,
        positive_roots: Sequence[LatticeVector],
        orientation: Sequence[Sequence[int]],
        table: Dict[Tuple[int, int], Vector],
    ):
        self.cartan = cartan
        self.orientation = tuple(tuple(row) for row in orientation)
        self.positive_roots = tuple(positive_roots)
        self.roots = self.positive_roots + tuple(-a for a in self.positive_roots)
        self.rank = cartan.n
        self.table = table
        self._root_index = {a.coefficients: self.rank + k for k, a in enumerate(self.roots)}

    @property
    def dimension(self) -> int:
        return self.rank + len(self.roots)

    def label(self, k: int) -> str:
        if k < self.rank:
            return f"h[{self.cartan.index[k]}]"
        return f"x[{self.roots[k - self.rank]}]"

    def root_of(self, k: int) -> Optional[LatticeVector]:
        return None if k < self.rank else self.roots[k - self.rank]

    def root_index(self, alpha: LatticeVector) -> int:
        try:
            return self._root_index[alpha.coefficients]
        except KeyError:
            raise RepresentationError(f"{alpha} is not a root") from None

    def has_root(self, alpha: LatticeVector) -> bool:
        return alpha.coefficients in self._root_index

    def sign(self, a: LatticeVector, b: LatticeVector) -> int:
        """eps(a, b) = (-1)^(a^T S b)"""
        total = sum(
            x * self.orientation[i][j] * y
            for i, x in enumerate(a.coefficients) if x
            for j, y in enumerate(b.coefficients) if y
        )
        return -1 if total % 2 else 1

    def basis_vector(self, k: int) -> Vector:
        return {k: QQ(1)}

    def h(self, name: str) -> Vector:
        return {self.cartan.index.index(name): QQ(1)}

    def e(self, name: str) -> Vector:
        return {self.root_index(LatticeVector.simple(self.cartan.index, name)): QQ(1)}

    def f(self, name: str) -> Vector:
        return {self.root_index(-LatticeVector.simple(self.cartan.index, name)): QQ(-1)}

    def bracket(self, u: Vector, v: Vector) -> Vector:
        result: Vector = {}
        for a, x in u.items():
            for b, y in v.items():
                entry = self.table.get((a, b))
                if entry:
                    add_into(result, entry, x * y)
        return result

    def ad_power(self, u: Vector, v: Vector, times: int) -> Vector:
        for _ in range(times):
            v = self.bracket(u, v)
            if not v:
                break
        return v

    def to_dense(self, v: Vector) -> Dense:
        dense = [QQ(0)] * self.dimension
        for k, x in v.items():
            dense[k] = x
        return dense

    @staticmethod
    def to_sparse(dense: Sequence[Rat]) -> Vector:
        return {k: to_qq(x) for k, x in enumerate(dense) if x}


@dataclass(frozen=True)
class LiftedAutomorphism:
    """
    Automorphism of a finite Lie algebra lifting a diagram automorphism

    images[k] = (index, sign): basis element k goes to sign * basis element
    index. The sign cocycle eta is +1 on simple roots and zero lift on the
    complement of the derived algebra (empty in finite type).
    """

    element: GroupElement
    permutation: Dict[str, str]
    eta: Dict[Tuple[int, ...], int]
    images: Tuple[Tuple[int, int], ...]

    def apply(self, v: Vector) -> Vector:
        result: Vector = {}
        for k, x in v.items():
            index, sign = self.images[k]
            result[index] = result.get(index, QQ(0)) + sign * x
        return clean(result)

    def compose(self, other: "LiftedAutomorphism") -> "LiftedAutomorphism":
        """self after other"""
        images = []
        for index, sign in other.images:
            target, second = self.images[index]
            images.append((target, sign * second))
        permutation = {v: self.permutation[w] for v, w in other.permutation.items()}
        return LiftedAutomorphism(self.element * other.element, permutation, {}, tuple(images))

    @property
    def is_identity(self) -> bool:
        return all(index == k and sign == 1 for k, (index, sign) in enumerate(self.images))

    def matrix(self) -> List[List[Rat]]:
        """Column k is the image of basis element k"""
        n = len(self.images)
        rows = [[QQ(0)] * n for _ in range(n)]
        for k, (index, sign) in enumerate(self.images):
            rows[index][k] = to_qq(sign)
        return rows


@dataclass
class Subalgebra:
    """Row-reduced basis of a subalgebra with its closure witness"""

    parent: FiniteLieAlgebra
    rows: List[Dense]
    pivots: Tuple[int, ...]
    closure: Dict[Tuple[int, int], List[Rat]] = field(default_factory=dict)

    @classmethod
    def spanned_by(cls, parent: FiniteLieAlgebra, vectors: Sequence[Dense]) -> "Subalgebra":
        reduced, pivots = rref(list(vectors), parent.dimension) if vectors else ([], ())
        return cls(parent, reduced, pivots)

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def coordinates(self, v: Vector) -> Optional[List[Rat]]:
        return express_in_rref(self.rows, self.pivots, self.parent.to_dense(v))

    def __contains__(self, v: Vector) -> bool:
        return self.coordinates(v) is not None

    def basis(self) -> List[Vector]:
        return [FiniteLieAlgebra.to_sparse(row) for row in self.rows]
