"""
Exact arithmetic in the cyclotomic field Q(zeta_L)

Elements are dense rational polynomials in zeta reduced modulo the
L-th cyclotomic polynomial (sympy dense polynomial routines over QQ).
"""

from functools import lru_cache
from typing import List, Sequence, Tuple, Union

from sympy.polys.densearith import dup_add, dup_mul, dup_mul_ground, dup_neg, dup_quo, dup_rem, dup_sub
from sympy.polys.densebasic import dup_strip
from sympy.polys.domains import QQ
from sympy.polys.euclidtools import dup_invert

from app.core.exceptions import GroupMismatchError
from app.utils.linalg import Rat, to_qq


Number = Union[int, Rat]


@lru_cache(maxsize=None)
def cyclotomic_coefficients(level: int) -> Tuple:
    """
    Phi_L as a dense QQ coefficient tuple (highest degree first)

    Computed as (x^L - 1) divided by Phi_d for every proper divisor d of L.
    """
    if level < 1:
        raise ValueError(f"Cyclotomic level must be positive, got {level}")
    poly = [QQ(1)] + [QQ(0)] * (level - 1) + [QQ(-1)]
    for d in range(1, level):
        if level % d == 0:
            poly = dup_quo(poly, list(cyclotomic_coefficients(d)), QQ)
    return tuple(poly)


def totient(level: int) -> int:
    return len(cyclotomic_coefficients(level)) - 1


class CycScalar:
    """
    Element of Q(zeta_L)

    The stored representative has degree < phi(L), so equality and the
    zero test are comparisons of coefficient tuples.
    """

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs: Sequence = ()):
        self.level = level
        modulus = list(cyclotomic_coefficients(level))
        poly = dup_strip([to_qq(c) for c in coeffs])
        if len(poly) >= len(modulus):
            poly = dup_rem(poly, modulus, QQ)
        self.coeffs = tuple(poly)

    @classmethod
    def zero(cls, level: int) -> "CycScalar":
        return cls(level, ())

    @classmethod
    def one(cls, level: int) -> "CycScalar":
        return cls(level, (QQ(1),))

    @classmethod
    def rational(cls, level: int, value: Number) -> "CycScalar":
        return cls(level, (to_qq(value),))

    @classmethod
    def root_of_unity(cls, level: int, exponent: int) -> "CycScalar":
        """zeta_L^exponent"""
        k = exponent % level
        return cls(level, [QQ(1)] + [QQ(0)] * k)

    @classmethod
    def from_vector(cls, level: int, vector: Sequence[Number]) -> "CycScalar":
        """Inverse of to_vector (coefficients in ascending powers)"""
        return cls(level, [to_qq(x) for x in reversed(list(vector))])

    def _coerce(self, other) -> "CycScalar":
        if isinstance(other, CycScalar):
            if other.level != self.level:
                raise GroupMismatchError(f"Cyclotomic levels differ: {self.level} vs {other.level}")
            return other
        if isinstance(other, (int, Rat)):
            return CycScalar.rational(self.level, other)
        return NotImplemented

    def __add__(self, other) -> "CycScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycScalar(self.level, dup_add(list(self.coeffs), list(other.coeffs), QQ))

    __radd__ = __add__

    def __sub__(self, other) -> "CycScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycScalar(self.level, dup_sub(list(self.coeffs), list(other.coeffs), QQ))

    def __rsub__(self, other) -> "CycScalar":
        return (-self) + other

    def __neg__(self) -> "CycScalar":
        return CycScalar(self.level, dup_neg(list(self.coeffs), QQ))

    def __mul__(self, other) -> "CycScalar":
        if isinstance(other, (int, Rat)):
            return CycScalar(self.level, dup_mul_ground(list(self.coeffs), to_qq(other), QQ))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycScalar(self.level, dup_mul(list(self.coeffs), list(other.coeffs), QQ))

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if self.is_zero:
            raise ZeroDivisionError("Zero has no inverse in a cyclotomic field")
        return CycScalar(
            self.level,
            dup_invert(list(self.coeffs), list(cyclotomic_coefficients(self.level)), QQ),
        )

    def __truediv__(self, other) -> "CycScalar":
        if isinstance(other, (int, Rat)):
            return self * (QQ(1) / to_qq(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, k: int) -> "CycScalar":
        if k < 0:
            return self.inverse() ** (-k)
        result = CycScalar.one(self.level)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Rat)):
            other = CycScalar.rational(self.level, other)
        if not isinstance(other, CycScalar):
            return NotImplemented
        return self.level == other.level and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.level, self.coeffs))

    def to_vector(self) -> List[Rat]:
        """Rational coordinates on 1, zeta, ..., zeta^(phi-1)"""
        n = totient(self.level)
        values = list(reversed(self.coeffs))
        return values + [QQ(0)] * (n - len(values))

    def multiplication_matrix(self) -> List[List[Rat]]:
        """phi x phi rational matrix of x -> self * x in the power basis"""
        n = totient(self.level)
        columns = [
            (self * CycScalar.root_of_unity(self.level, t)).to_vector()
            for t in range(n)
        ]
        return [[columns[j][i] for j in range(n)] for i in range(n)]

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def to_rational(self) -> Rat:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else QQ(0)

    def to_sympy(self, symbol):
        """Polynomial expression in the given symbol"""
        degree = len(self.coeffs) - 1
        return sum(
            (QQ.to_sympy(c) * symbol ** (degree - i) for i, c in enumerate(self.coeffs)),
            QQ.to_sympy(QQ(0)),
        )

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        degree = len(self.coeffs) - 1
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            power = degree - i
            coefficient = str(c)
            if power == 0:
                terms.append(coefficient)
            else:
                monomial = "z" if power == 1 else f"z^{power}"
                terms.append(monomial if coefficient == "1" else f"{coefficient}*{monomial}")
        return " + ".join(terms)
