"""
Root lattices and bilinear forms
"""

from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

from app.core.exceptions import LatticeMismatchError


@dataclass(frozen=True)
class LatticeVector:
    """Integer vector on a fixed, ordered index set"""

    index: Tuple[str, ...]
    coefficients: Tuple[int, ...]

    def __post_init__(self):
        if len(self.index) != len(self.coefficients):
            raise LatticeMismatchError(
                f"Vector of length {len(self.coefficients)} on index set of size {len(self.index)}"
            )

    @classmethod
    def zero(cls, index: Sequence[str]) -> "LatticeVector":
        return cls(tuple(index), (0,) * len(index))

    @classmethod
    def simple(cls, index: Sequence[str], name: str) -> "LatticeVector":
        index = tuple(index)
        if name not in index:
            raise LatticeMismatchError(f"{name} is not in the index set")
        return cls(index, tuple(1 if v == name else 0 for v in index))

    @classmethod
    def from_mapping(cls, index: Sequence[str], values: Mapping[str, int]) -> "LatticeVector":
        index = tuple(index)
        unknown = set(values) - set(index)
        if unknown:
            raise LatticeMismatchError(f"Coordinates {sorted(unknown)} are not in the index set")
        return cls(index, tuple(int(values.get(v, 0)) for v in index))

    def _check(self, other: "LatticeVector") -> None:
        if self.index != other.index:
            raise LatticeMismatchError("Lattice vectors live on different index sets")

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(self.index, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(self.index, tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(self.index, tuple(-a for a in self.coefficients))

    def __mul__(self, k: int) -> "LatticeVector":
        return LatticeVector(self.index, tuple(k * a for a in self.coefficients))

    __rmul__ = __mul__

    def __getitem__(self, name: str) -> int:
        return self.coefficients[self.index.index(name)]

    @property
    def height(self) -> int:
        return sum(self.coefficients)

    @property
    def support(self) -> Tuple[str, ...]:
        return tuple(v for v, a in zip(self.index, self.coefficients) if a)

    @property
    def is_zero(self) -> bool:
        return not any(self.coefficients)

    @property
    def is_positive(self) -> bool:
        return not self.is_zero and all(a >= 0 for a in self.coefficients)

    @property
    def is_negative(self) -> bool:
        return (-self).is_positive

    def to_dict(self) -> Dict[str, int]:
        return {v: a for v, a in zip(self.index, self.coefficients) if a}

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for v, a in zip(self.index, self.coefficients):
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            size = "" if abs(a) == 1 else str(abs(a))
            terms.append(f"{sign}{size}e[{v}]")
        text = "".join(terms)
        return text[1:] if text.startswith("+") else text


@dataclass(frozen=True)
class BilinearForm:
    """
    Symmetric integer form (e_i, e_j) = matrix[i][j] with (e_i, e_i) = 2 d_i
    """

    index: Tuple[str, ...]
    matrix: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, index: Sequence[str], rows: Sequence[Sequence[int]]) -> "BilinearForm":
        return cls(tuple(index), tuple(tuple(int(x) for x in row) for row in rows))

    def _check(self, v: LatticeVector) -> None:
        if v.index != self.index:
            raise LatticeMismatchError("Vector does not live on the form's index set")

    def pair(self, v: LatticeVector, w: LatticeVector) -> int:
        self._check(v)
        self._check(w)
        return sum(
            a * self.matrix[i][j] * b
            for i, a in enumerate(v.coefficients) if a
            for j, b in enumerate(w.coefficients) if b
        )

    def norm(self, v: LatticeVector) -> int:
        return self.pair(v, v)

    def d(self, name: str) -> int:
        i = self.index.index(name)
        return self.matrix[i][i] // 2

    def cartan_rows(self) -> List[List[int]]:
        """c_ij = b_ij / d_i"""
        return [
            [self.matrix[i][j] // (self.matrix[i][i] // 2) for j in range(len(self.index))]
            for i in range(len(self.index))
        ]

    def simple(self, name: str) -> LatticeVector:
        return LatticeVector.simple(self.index, name)

    def basis(self) -> List[LatticeVector]:
        return [self.simple(v) for v in self.index]
