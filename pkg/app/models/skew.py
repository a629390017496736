"""
Skew group algebra kQ*G

Elements are finite sums of terms c * (path, g) with c in Q(zeta_L).
Multiplication: (p g)(p' g') = p * g(p') (g g'), the scalar of g(p')
coming from the monomial action.
"""

from typing import Dict, Iterator, Optional, Tuple

from app.core.exceptions import GroupMismatchError
from app.models.cyclotomic import CycScalar
from app.models.group import Character, GroupElement
from app.models.quiver import MonomialAction, Path


Term = Tuple[Path, Tuple[int, ...]]


class SkewElement:

    __slots__ = ("action", "terms")

    def __init__(self, action: MonomialAction, terms: Optional[Dict[Term, CycScalar]] = None):
        self.action = action
        self.terms: Dict[Term, CycScalar] = {k: v for k, v in (terms or {}).items() if not v.is_zero}

    @classmethod
    def zero(cls, action: MonomialAction) -> "SkewElement":
        return cls(action, {})

    @classmethod
    def monomial(
        cls,
        action: MonomialAction,
        path: Path,
        g: Optional[GroupElement] = None,
        scalar: Optional[CycScalar] = None,
    ) -> "SkewElement":
        g = g if g is not None else action.group.identity()
        scalar = scalar if scalar is not None else CycScalar.one(action.level)
        return cls(action, {(path, g.exponents): scalar})

    @classmethod
    def vertex(cls, action: MonomialAction, vertex: str) -> "SkewElement":
        return cls.monomial(action, Path.trivial(vertex))

    @classmethod
    def arrow(cls, action: MonomialAction, arrow_id: str) -> "SkewElement":
        a = action.quiver.arrow(arrow_id)
        return cls.monomial(action, Path(a.source, a.target, (a.id,)))

    def _check(self, other: "SkewElement") -> None:
        if other.action is not self.action:
            raise GroupMismatchError("Skew elements over different actions cannot be combined")

    def __add__(self, other: "SkewElement") -> "SkewElement":
        self._check(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms[key] + c if key in terms else c
        return SkewElement(self.action, terms)

    def __neg__(self) -> "SkewElement":
        return SkewElement(self.action, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "SkewElement") -> "SkewElement":
        return self + (-other)

    def scale(self, c) -> "SkewElement":
        return SkewElement(self.action, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "SkewElement") -> "SkewElement":
        self._check(other)
        group = self.action.group
        level = self.action.level
        terms: Dict[Term, CycScalar] = {}
        for (p, g_exps), c in self.terms.items():
            g = GroupElement(group, g_exps)
            for (q, h_exps), d in other.terms.items():
                moved, k = self.action.act_path(g, q)
                product = p.after(moved)
                if product is None:
                    continue
                gh = (g * GroupElement(group, h_exps)).exponents
                value = c * d * CycScalar.root_of_unity(level, k)
                key = (product, gh)
                terms[key] = terms[key] + value if key in terms else value
        return SkewElement(self.action, terms)

    def coefficient(self, path: Path, g: GroupElement) -> CycScalar:
        return self.terms.get((path, g.exponents), CycScalar.zero(self.action.level))

    def dual_action(self, g: GroupElement) -> "SkewElement":
        """g(lambda h) = chi_g(h) lambda h"""
        group = self.action.group
        level = self.action.level
        chi_g = Character(group, g.exponents)
        return SkewElement(self.action, {
            (p, h): c * CycScalar.root_of_unity(level, chi_g.value(GroupElement(group, h), level))
            for (p, h), c in self.terms.items()
        })

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkewElement):
            return NotImplemented
        return self.action is other.action and self.terms == other.terms

    def __iter__(self) -> Iterator[Tuple[Term, CycScalar]]:
        return iter(sorted(self.terms.items(), key=lambda kv: (kv[0][0].arrows, kv[0][0].source, kv[0][1])))

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for (p, h), c in self:
            parts.append(f"({c})*{p}*{list(h)}")
        return " + ".join(parts)
