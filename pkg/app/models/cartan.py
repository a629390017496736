"""
Cartan data: matrices, folded valued graphs and type classification
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple


@dataclass(frozen=True)
class CartanMatrix:
    """Square integer matrix indexed by vertex names"""

    index: Tuple[str, ...]
    matrix: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, index: Sequence[str], rows: Sequence[Sequence[int]]) -> "CartanMatrix":
        return cls(tuple(index), tuple(tuple(int(x) for x in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.index)

    @property
    def symmetric(self) -> bool:
        return all(
            self.matrix[i][j] == self.matrix[j][i]
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def entry(self, i: str, j: str) -> int:
        return self.matrix[self.index.index(i)][self.index.index(j)]

    def rows(self) -> List[List[int]]:
        return [list(row) for row in self.matrix]

    def transpose(self) -> "CartanMatrix":
        return CartanMatrix.from_rows(self.index, [list(col) for col in zip(*self.matrix)])

    def restrict(self, names: Sequence[str]) -> "CartanMatrix":
        positions = [self.index.index(v) for v in names]
        return CartanMatrix.from_rows(names, [[self.matrix[i][j] for j in positions] for i in positions])

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.matrix) + "]"


@dataclass(frozen=True)
class ValuedGraphData:
    """
    Folded data on orbit representatives: B symmetric with b_ii = 2 d_i,
    D = diag(d_i) with d_i the orbit sizes, C = D^-1 B
    """

    index: Tuple[str, ...]
    B: CartanMatrix
    D: Tuple[int, ...]
    C: CartanMatrix
    edge_labels: Dict[Tuple[str, str], Tuple[int, int]]

    def d(self, name: str) -> int:
        return self.D[self.index.index(name)]


@dataclass(frozen=True)
class ComponentType:
    vertices: Tuple[str, ...]
    kind: str
    label: Optional[str] = None


@dataclass(frozen=True)
class TypeClassification:
    kind: str
    components: Tuple[ComponentType, ...]

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def labels(self) -> List[Optional[str]]:
        return [c.label for c in self.components]

    def __str__(self) -> str:
        parts = [c.label or c.kind for c in self.components]
        return " + ".join(parts) if parts else "empty"
