"""
Exact linear algebra helpers

Integer Smith normal form with transformation matrices, and rational
row reduction / null spaces on top of sympy's DomainMatrix over QQ.
"""

from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix


IntMatrix = List[List[int]]
# exact rationals are sympy QQ elements throughout
Rat = QQ.dtype
RatMatrix = List[List[Rat]]


def _identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _swap_rows(A: IntMatrix, i: int, j: int) -> None:
    A[i], A[j] = A[j], A[i]


def _swap_cols(A: IntMatrix, i: int, j: int) -> None:
    for row in A:
        row[i], row[j] = row[j], row[i]


def _add_row(A: IntMatrix, target: int, source: int, factor: int) -> None:
    """row[target] += factor * row[source]"""
    A[target] = [a + factor * b for a, b in zip(A[target], A[source])]


def _add_col(A: IntMatrix, target: int, source: int, factor: int) -> None:
    """col[target] += factor * col[source]"""
    for row in A:
        row[target] += factor * row[source]


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Smith normal form D = U * M * V of an integer matrix

    Args:
        matrix: m x n integer matrix (rows)

    Returns:
        (U, D, V) with U (m x m) and V (n x n) unimodular and D diagonal,
        nonnegative, with d_1 | d_2 | ...
    """
    A = [[int(x) for x in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    for t in range(min(m, n)):
        candidates = [
            (abs(A[i][j]), i, j)
            for i in range(t, m)
            for j in range(t, n)
            if A[i][j] != 0
        ]
        if not candidates:
            break
        _, pi, pj = min(candidates)
        _swap_rows(A, t, pi)
        _swap_rows(U, t, pi)
        _swap_cols(A, t, pj)
        _swap_cols(V, t, pj)

        while True:
            reduced = True
            for i in range(t + 1, m):
                q = A[i][t] // A[t][t]
                if q:
                    _add_row(A, i, t, -q)
                    _add_row(U, i, t, -q)
                if A[i][t] != 0:
                    _swap_rows(A, t, i)
                    _swap_rows(U, t, i)
                    reduced = False
                    break
            if not reduced:
                continue

            for j in range(t + 1, n):
                q = A[t][j] // A[t][t]
                if q:
                    _add_col(A, j, t, -q)
                    _add_col(V, j, t, -q)
                if A[t][j] != 0:
                    _swap_cols(A, t, j)
                    _swap_cols(V, t, j)
                    reduced = False
                    break
            if not reduced:
                continue

            # pivot must divide the whole remaining block
            offender = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if offender is None:
                break
            _add_row(A, t, offender, 1)
            _add_row(U, t, offender, 1)

        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]

    return U, A, V


def int_matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    return [
        [sum(a * B[k][j] for k, a in enumerate(row)) for j in range(len(B[0]))]
        for row in A
    ]


def to_qq(value) -> Rat:
    """Coerce an int, a QQ element or a sympy Rational into QQ"""
    if isinstance(value, Rat):
        return value
    if isinstance(value, int):
        return QQ(value)
    if hasattr(value, "p") and hasattr(value, "q"):
        return QQ(int(value.p), int(value.q))
    return QQ(int(value.numerator), int(value.denominator))


def to_domain_matrix(rows: Sequence[Sequence], ncols: Optional[int] = None) -> DomainMatrix:
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if nrows else 0
    data = [[to_qq(x) for x in row] for row in rows]
    return DomainMatrix(data, (nrows, ncols), QQ)


def from_domain_matrix(dm: DomainMatrix) -> RatMatrix:
    return [list(row) for row in dm.to_list()]


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None) -> Tuple[RatMatrix, Tuple[int, ...]]:
    """
    Reduced row echelon form over QQ

    Returns:
        (nonzero rows of the RREF, pivot columns)
    """
    if not rows:
        return [], ()
    reduced, pivots = to_domain_matrix(rows, ncols).rref()
    dense = from_domain_matrix(reduced)
    return dense[: len(pivots)], tuple(pivots)


def rank(rows: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    if not rows:
        return 0
    return to_domain_matrix(rows, ncols).rank()


def nullspace(rows: Sequence[Sequence], ncols: int) -> RatMatrix:
    """
    Basis of {x : rows * x = 0} read off the RREF free columns

    Args:
        rows: coefficient rows, each of length ncols
        ncols: number of unknowns

    Returns:
        List of basis vectors (one per free column, in column order)
    """
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = [QQ(0)] * ncols
        vector[free] = QQ(1)
        for row, pivot in zip(reduced, pivots):
            vector[pivot] = -row[free]
        basis.append(vector)
    return basis


def express_in_rref(
    reduced: Sequence[Sequence[Rat]],
    pivots: Sequence[int],
    vector: Sequence,
) -> Optional[List[Rat]]:
    """
    Coefficients of vector in an RREF basis, or None when outside the span
    """
    coefficients = [to_qq(vector[p]) for p in pivots]
    residual = [to_qq(x) for x in vector]
    for c, row in zip(coefficients, reduced):
        if c:
            residual = [r - c * x for r, x in zip(residual, row)]
    if any(residual):
        return None
    return coefficients


def inverse(rows: Sequence[Sequence]) -> RatMatrix:
    return from_domain_matrix(to_domain_matrix(rows).inv())


def determinant(rows: Sequence[Sequence]) -> Rat:
    if not rows:
        return QQ(1)
    return to_domain_matrix(rows).det()


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> RatMatrix:
    if not A:
        return []
    width = len(B[0]) if B else 0
    return [
        [sum((to_qq(a) * to_qq(B[k][j]) for k, a in enumerate(row)), QQ(0)) for j in range(width)]
        for row in A
    ]
