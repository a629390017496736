"""
Representation Service Module

Twists, morphism spaces and isomorphism tests of quiver representations
over Q(zeta_L), orbit sums Sigma(M), and indecomposables of Dynkin
quivers built with reflection functors.
"""

import itertools
import logging
import random
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Symbol, cyclotomic_poly, expand, rem, symbols
from sympy.polys.domains import QQ

from app.config import settings
from app.core.exceptions import ConstructionMismatchError, NotFiniteTypeError, RepresentationError
from app.models.cyclotomic import CycScalar, totient
from app.models.group import GroupElement, Subgroup
from app.models.lattice import LatticeVector
from app.models.quiver import MonomialAction, Quiver
from app.models.representation import IsomorphismResult, Matrix as RepMatrix, Morphism, Representation, TwistData
from app.schemas.report import CheckRecord, Report
from app.services.cartan_service import cartan_of_quiver, classify
from app.services.pipeline import FoldingFixture
from app.services.root_service import enumerate_roots, reflect
from app.utils.linalg import Rat, express_in_rref, nullspace, rank, rref


logger = logging.getLogger(__name__)

# largest grid swept before falling back to the determinant polynomial
GRID_LIMIT = 4096


def simple(quiver: Quiver, vertex: str, level: int = 1) -> Representation:
    return Representation(quiver, level, {vertex: 1})


def thin(quiver: Quiver, support: Sequence[str], level: int = 1) -> Representation:
    """1-dimensional at the support, identity on arrows inside it"""
    keep = set(support)
    maps = {a.id: [[1]] for a in quiver.arrows if a.source in keep and a.target in keep}
    return Representation(quiver, level, {v: 1 for v in support}, maps)


def direct_sum(modules: Sequence[Representation]) -> Representation:
    """
    Raises:
        RepresentationError: If the summands live on different quivers or levels
    """
    if not modules:
        raise RepresentationError("Direct sum of no representations")
    first = modules[0]
    for m in modules[1:]:
        _check_compatible(first, m)
    quiver, level = first.quiver, first.level
    zero = CycScalar.zero(level)
    dims = {v: sum(m.dims[v] for m in modules) for v in quiver.vertices}
    maps = {}
    for a in quiver.arrows:
        rows = [[zero] * dims[a.source] for _ in range(dims[a.target])]
        row_offset, col_offset = 0, 0
        for m in modules:
            for r, row in enumerate(m.maps[a.id]):
                for c, x in enumerate(row):
                    rows[row_offset + r][col_offset + c] = x
            row_offset += m.dims[a.target]
            col_offset += m.dims[a.source]
        maps[a.id] = rows
    return Representation(quiver, level, dims, maps)


def _check_compatible(M: Representation, N: Representation) -> None:
    if M.quiver.vertices != N.quiver.vertices or M.quiver.arrow_ids != N.quiver.arrow_ids:
        raise RepresentationError("Representations live on different quivers")
    if M.level != N.level:
        raise RepresentationError(f"Representations over different fields: levels {M.level} and {N.level}")


def twist(action: MonomialAction, g: GroupElement, M: Representation) -> Representation:
    """
    ^gM with (^gM)_i = M_g(i) and (^gM)_a = zeta^k M_b where g(a) = zeta^k b

    Raises:
        RepresentationError: If M is not a representation of the acted quiver
            over the action's field
    """
    if M.quiver.vertices != action.quiver.vertices or M.quiver.arrow_ids != action.quiver.arrow_ids:
        raise RepresentationError("Representation does not live on the acted quiver")
    if M.level != action.level:
        raise RepresentationError(f"Representation level {M.level} differs from action level {action.level}")
    element = action.element_action(g)
    dims = {v: M.dims[element.vertex_perm[v]] for v in action.quiver.vertices}
    maps = {}
    for arrow_id, (image, k) in element.arrow_map.items():
        scalar = CycScalar.root_of_unity(action.level, k)
        maps[arrow_id] = [[scalar * x for x in row] for row in M.maps[image]]
    return Representation(action.quiver, action.level, dims, maps)


def twist_data(action: MonomialAction, g: GroupElement, M: Representation) -> TwistData:
    return TwistData(element=g, module=twist(action, g, M))


class _HomSystem:
    """Realified linear system phi_j M_a = N_a phi_i over Q"""

    def __init__(self, M: Representation, N: Representation):
        self.M, self.N = M, N
        self.level = M.level
        self.phi = totient(M.level)
        self.offsets: Dict[str, int] = {}
        total = 0
        for v in M.quiver.vertices:
            self.offsets[v] = total
            total += N.dims[v] * M.dims[v] * self.phi
        self.total = total
        self._blocks: Dict[CycScalar, List[List[Rat]]] = {}

    def index(self, v: str, r: int, c: int) -> int:
        return self.offsets[v] + (r * self.M.dims[v] + c) * self.phi

    def block(self, s: CycScalar) -> List[List[Rat]]:
        if s not in self._blocks:
            self._blocks[s] = s.multiplication_matrix()
        return self._blocks[s]

    def rows(self) -> List[List[Rat]]:
        M, N, phi = self.M, self.N, self.phi
        rows = []
        for a in M.quiver.arrows:
            i, j = a.source, a.target
            Ma, Na = M.maps[a.id], N.maps[a.id]
            for r in range(N.dims[j]):
                for c in range(M.dims[i]):
                    equations = [[QQ(0)] * self.total for _ in range(phi)]
                    for k in range(M.dims[j]):
                        if Ma[k][c].is_zero:
                            continue
                        block, base = self.block(Ma[k][c]), self.index(j, r, k)
                        for t in range(phi):
                            for u in range(phi):
                                equations[t][base + u] += block[t][u]
                    for k in range(N.dims[i]):
                        if Na[r][k].is_zero:
                            continue
                        block, base = self.block(Na[r][k]), self.index(i, k, c)
                        for t in range(phi):
                            for u in range(phi):
                                equations[t][base + u] -= block[t][u]
                    rows.extend(equations)
        return rows

    def times_zeta(self, vector: List[Rat]) -> List[Rat]:
        block = self.block(CycScalar.root_of_unity(self.level, 1))
        result = []
        for start in range(0, self.total, self.phi):
            chunk = vector[start:start + self.phi]
            result.extend(sum((block[t][u] * chunk[u] for u in range(self.phi)), QQ(0)) for t in range(self.phi))
        return result

    def to_morphism(self, vector: Sequence[Rat]) -> Morphism:
        morphism = {}
        for v in self.M.quiver.vertices:
            morphism[v] = tuple(
                tuple(
                    CycScalar.from_vector(self.level, vector[self.index(v, r, c):self.index(v, r, c) + self.phi])
                    for c in range(self.M.dims[v])
                )
                for r in range(self.N.dims[v])
            )
        return morphism


def hom_space(M: Representation, N: Representation) -> List[Morphism]:
    """
    Basis over Q(zeta_L) of the intertwiners M -> N

    The system is solved over Q on coordinates in the power basis; a
    field basis is extracted greedily from the rational solution space.
    """
    _check_compatible(M, N)
    system = _HomSystem(M, N)
    if system.total == 0:
        return []
    equations = system.rows()
    if equations:
        rational_basis = nullspace(equations, system.total)
    else:
        rational_basis = [[QQ(1 if c == r else 0) for c in range(system.total)] for r in range(system.total)]

    basis: List[List[Rat]] = []
    span: List[List[Rat]] = []
    reduced, pivots = [], ()
    for vector in rational_basis:
        if express_in_rref(reduced, pivots, vector) is not None:
            continue
        basis.append(vector)
        w = vector
        for _ in range(system.phi):
            span.append(w)
            w = system.times_zeta(w)
        reduced, pivots = rref(span, system.total)
    logger.debug(f"Hom space: dim_M={M.dimension_vector()}, dim_N={N.dimension_vector()}, dimension={len(basis)}")
    return [system.to_morphism(v) for v in basis]


def endomorphism_dimension(M: Representation) -> int:
    return len(hom_space(M, M))


def _combine(basis: Sequence[Morphism], coefficients: Sequence[int], level: int) -> Morphism:
    morphism = {}
    for v in basis[0]:
        rows = []
        for r, row in enumerate(basis[0][v]):
            rows.append(tuple(
                sum((b[v][r][c] * k for b, k in zip(basis, coefficients)), CycScalar.zero(level))
                for c in range(len(row))
            ))
        morphism[v] = tuple(rows)
    return morphism


def _field_rank(matrix: RepMatrix) -> int:
    rows = [list(row) for row in matrix]
    rank_found = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        pivot = next((r for r in range(rank_found, len(rows)) if not rows[r][col].is_zero), None)
        if pivot is None:
            continue
        rows[rank_found], rows[pivot] = rows[pivot], rows[rank_found]
        inverse = rows[rank_found][col].inverse()
        for r in range(len(rows)):
            if r != rank_found and not rows[r][col].is_zero:
                factor = rows[r][col] * inverse
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank_found])]
        rank_found += 1
    return rank_found


def is_invertible(morphism: Morphism) -> bool:
    return all(len(m) == 0 or (len(m) == len(m[0]) and _field_rank(m) == len(m)) for m in morphism.values())


def is_isomorphic(M: Representation, N: Representation, seed: Optional[int] = None) -> IsomorphismResult:
    """
    Decide M ≅ N by searching an invertible element of Hom(M, N)

    Seeded random combinations come first, then a sweep of a small integer
    grid; a negative is certified when the product of the vertex
    determinants, as a polynomial in the basis coefficients reduced
    modulo Phi_L, vanishes identically.
    """
    _check_compatible(M, N)
    if M.dimension_vector() != N.dimension_vector():
        return IsomorphismResult(False, True, "dimension vectors differ")
    if M.is_zero:
        return IsomorphismResult(True, True, "zero representations", witness={v: () for v in M.quiver.vertices})
    basis = hom_space(M, N)
    if not basis:
        return IsomorphismResult(False, True, "hom space is zero")
    k = len(basis)
    seed = settings.random_seed if seed is None else seed
    rng = random.Random(seed)

    for _ in range(settings.iso_retry_budget):
        coefficients = [rng.randint(-10, 10) for _ in range(k)]
        candidate = _combine(basis, coefficients, M.level)
        if is_invertible(candidate):
            return IsomorphismResult(True, True, "random combination", candidate, k)

    radius = settings.iso_grid_radius
    if (2 * radius + 1) ** k <= GRID_LIMIT:
        for coefficients in itertools.product(range(-radius, radius + 1), repeat=k):
            candidate = _combine(basis, coefficients, M.level)
            if is_invertible(candidate):
                return IsomorphismResult(True, True, "grid sweep", candidate, k)

    z = Symbol("z")
    t = symbols(f"t0:{k}")
    determinant = 1
    for v in M.quiver.vertices:
        if not M.dims[v]:
            continue
        entries = [
            [sum(t[m] * basis[m][v][r][c].to_sympy(z) for m in range(k)) for c in range(M.dims[v])]
            for r in range(N.dims[v])
        ]
        determinant *= Matrix(entries).det()
    modulus = cyclotomic_poly(M.level, z)
    reduced = expand(rem(expand(determinant), modulus, z))
    if reduced == 0:
        return IsomorphismResult(False, True, "determinant polynomial vanishes", hom_dimension=k)

    degree = M.total_dimension
    for point in itertools.product(range(degree + 1), repeat=k):
        value = expand(rem(expand(reduced.subs(dict(zip(t, point)))), modulus, z))
        if value != 0:
            candidate = _combine(basis, point, M.level)
            if is_invertible(candidate):
                return IsomorphismResult(True, True, "determinant polynomial", candidate, k)
    logger.warning(f"Isomorphism search inconclusive: hom_dimension={k}")
    return IsomorphismResult(False, False, "search exhausted", hom_dimension=k)


def twist_stabilizer(action: MonomialAction, M: Representation, seed: Optional[int] = None) -> Subgroup:
    """H_M = {g : ^gM ≅ M}"""
    members = [g for g in action.group.elements() if is_isomorphic(twist(action, g, M), M, seed).isomorphic]
    return Subgroup(action.group, members)


def coset_representatives(subgroup: Subgroup, largest: bool = False) -> List[GroupElement]:
    """Smallest (or largest) element of every coset, cosets in order of their smallest element"""
    if not largest:
        return subgroup.coset_representatives()
    result = []
    for smallest in subgroup.coset_representatives():
        result.append(max(smallest * h for h in subgroup.elements()))
    return result


def sigma_module(
    action: MonomialAction,
    M: Representation,
    seed: Optional[int] = None,
    largest_representatives: bool = False,
) -> Representation:
    """
    Sigma(M) = direct sum of ^gM over coset representatives g of H_M

    Raises:
        ConstructionMismatchError: If the result is not G-invariant
    """
    stabilizer = twist_stabilizer(action, M, seed)
    representatives = coset_representatives(stabilizer, largest=largest_representatives)
    result = direct_sum([twist(action, g, M) for g in representatives])
    for g in action.group.generators():
        if not is_isomorphic(twist(action, g, result), result, seed).isomorphic:
            logger.error(f"Orbit sum not invariant: generator={g}, dim={result.dimension_vector()}")
            raise ConstructionMismatchError(f"Sigma(M) is not invariant under {g}")
    logger.debug(
        f"Orbit sum built: dim_M={M.dimension_vector()}, stabilizer={stabilizer.order}, "
        f"summands={len(representatives)}"
    )
    return result


def twist_orbit(action: MonomialAction, M: Representation, seed: Optional[int] = None) -> List[TwistData]:
    """Pairwise non-isomorphic twists of M, one per coset of H_M"""
    stabilizer = twist_stabilizer(action, M, seed)
    return [twist_data(action, g, M) for g in stabilizer.coset_representatives()]


def _rational(M: Representation) -> Dict[str, List[List[Rat]]]:
    try:
        return {a: [[x.to_rational() for x in row] for row in m] for a, m in M.maps.items()}
    except ValueError:
        raise RepresentationError("Reflection functors need rational matrices") from None


def reflection_functor_plus(M: Representation, k: str) -> Representation:
    """
    S+_k at a sink k: kernel of the sum of the incoming maps

    Raises:
        RepresentationError: If k is not a sink
    """
    quiver = M.quiver
    if not quiver.is_sink(k):
        raise RepresentationError(f"{k} is not a sink")
    maps = _rational(M)
    incoming = quiver.incoming(k)
    width = sum(M.dims[a.source] for a in incoming)
    psi = [[QQ(0)] * width for _ in range(M.dims[k])]
    offset = 0
    for a in incoming:
        for r in range(M.dims[k]):
            for c in range(M.dims[a.source]):
                psi[r][offset + c] = maps[a.id][r][c]
        offset += M.dims[a.source]
    kernel = nullspace(psi, width) if psi else [
        [QQ(1 if c == r else 0) for c in range(width)] for r in range(width)
    ]

    new_maps = {a: m for a, m in maps.items()}
    offset = 0
    for a in incoming:
        new_maps[a.id] = [
            [vector[offset + r] for vector in kernel] for r in range(M.dims[a.source])
        ]
        offset += M.dims[a.source]
    dims = dict(M.dims)
    dims[k] = len(kernel)
    return Representation(quiver.reflected_at(k), M.level, dims, new_maps)


def reflection_functor_minus(M: Representation, k: str) -> Representation:
    """
    S-_k at a source k: cokernel of the sum of the outgoing maps

    Raises:
        RepresentationError: If k is not a source
    """
    quiver = M.quiver
    if not quiver.is_source(k):
        raise RepresentationError(f"{k} is not a source")
    maps = _rational(M)
    outgoing = quiver.outgoing(k)
    height = sum(M.dims[a.target] for a in outgoing)
    phi_rows = []
    for a in outgoing:
        phi_rows.extend(maps[a.id])
    transpose = [[phi_rows[r][c] for r in range(height)] for c in range(M.dims[k])]
    cokernel = nullspace(transpose, height) if transpose else [
        [QQ(1 if c == r else 0) for c in range(height)] for r in range(height)
    ]

    new_maps = {a: m for a, m in maps.items()}
    offset = 0
    for a in outgoing:
        new_maps[a.id] = [row[offset:offset + M.dims[a.target]] for row in cokernel]
        offset += M.dims[a.target]
    dims = dict(M.dims)
    dims[k] = len(cokernel)
    return Representation(quiver.reflected_at(k), M.level, dims, new_maps)


def indecomposable(quiver: Quiver, beta: LatticeVector, level: int = 1) -> Representation:
    """
    Indecomposable of a Dynkin quiver with dimension vector beta

    On the component of the support, reflect at the first sink until beta
    becomes the simple root of that sink, then climb back with S-.

    Raises:
        ConstructionMismatchError: If the walk does not end or lands on the
            wrong dimension vector
    """
    component = next(c for c in quiver.connected_components() if beta.support[0] in c)
    sub = quiver.full_subquiver(component)
    A = cartan_of_quiver(sub)
    vector = LatticeVector(sub.vertices, tuple(beta[v] for v in sub.vertices))
    steps: List[str] = []
    current = sub
    limit = 4 * len(sub.vertices) * (vector.height + len(sub.vertices)) ** 2
    while True:
        k = next(v for v in current.vertices if current.is_sink(v))
        if vector == LatticeVector.simple(sub.vertices, k):
            break
        vector = reflect(A, k, vector)
        if not vector.is_positive or len(steps) > limit:
            raise ConstructionMismatchError(f"Reflection walk failed for {beta}")
        steps.append(k)
        current = current.reflected_at(k)

    module = simple(current, k, 1)
    for k in reversed(steps):
        module = reflection_functor_minus(module, k)

    rational = _rational(module)
    result = Representation(quiver, level, module.dims, {
        a: [[CycScalar.rational(level, x) for x in row] for row in m] for a, m in rational.items()
    })
    if result.dimension_vector() != beta:
        raise ConstructionMismatchError(f"Reflection functors produced {result.dimension_vector()}, expected {beta}")
    return result


def indecomposables_dynkin(quiver: Quiver, level: int = 1) -> List[Representation]:
    """
    One indecomposable per positive root, in root order

    Raises:
        InvalidQuiverError: If the quiver has loops
        NotFiniteTypeError: If some component is not Dynkin
        ConstructionMismatchError: If a result has endomorphisms beyond scalars
    """
    A = cartan_of_quiver(quiver)
    classification = classify(A)
    if not classification.is_finite:
        raise NotFiniteTypeError(f"Quiver of type {classification} is not a union of Dynkin quivers")
    modules = []
    for beta in enumerate_roots(A).positive_roots:
        module = indecomposable(quiver, beta, level)
        if endomorphism_dimension(module) != 1:
            raise ConstructionMismatchError(f"Representation of dimension {beta} is not a brick")
        modules.append(module)
    logger.info(f"Indecomposables built: type={classification}, count={len(modules)}")
    return modules


def verify_invariant_modules(fixture: FoldingFixture, seed: Optional[int] = None) -> Report:
    """
    G-invariant modules over the real roots of Gamma

    For every positive real root alpha of Gamma take a real root beta of
    Q with pi(beta) = alpha, the indecomposable N of dimension beta and
    M = Sigma(N); then f(dim M) = alpha, M is G-invariant and
    (dim M, dim M)_Q / 2 is the number of summands [G : H_N].

    Raises:
        NotFiniteTypeError: If Q is not a union of Dynkin quivers
    """
    A = fixture.A
    if not classify(A).is_finite:
        raise NotFiniteTypeError("Orbit sums are checked only for Dynkin quivers")
    action, maps = fixture.action, fixture.maps
    level = action.level
    roots_Q = enumerate_roots(A)
    roots_Gamma = enumerate_roots(fixture.folded)
    preimages: Dict[Tuple[int, ...], LatticeVector] = {}
    for beta in roots_Q.real_vectors:
        preimages.setdefault(maps.pi(beta).coefficients, beta)

    report = Report(command="verify invariant-modules", fixture=fixture.name, seed=seed)
    rows, failures = [], []
    for alpha in roots_Gamma.positive_roots:
        beta = preimages.get(alpha.coefficients)
        if beta is None:
            failures.append({"root": str(alpha), "reason": "no preimage"})
            continue
        N = indecomposable(fixture.quiver, beta, level)
        stabilizer = twist_stabilizer(action, N, seed)
        summands = action.group.order // stabilizer.order
        M = sigma_module(action, N, seed)
        dim_M = M.dimension_vector()
        half_norm = fixture.form_Q.norm(dim_M) // 2
        ok = (
            maps.f(dim_M) == alpha
            and half_norm == summands
            and stabilizer == maps.stabilizer(beta)
        )
        rows.append({"root": str(alpha), "beta": str(beta), "dim": str(dim_M), "summands": summands})
        if not ok:
            failures.append({"root": str(alpha), "dim": str(dim_M), "half_norm": half_norm, "summands": summands})
    report.checks.append(CheckRecord.of("invariant_modules_over_real_roots", not failures, witness=failures[:5]))
    report.data["modules"] = rows
    logger.info(f"Invariant modules verified: fixture={fixture.name or '-'}, roots={len(rows)}, passed={report.passed}")
    return report


def verify_fiber_modules(fixture: FoldingFixture, seed: Optional[int] = None) -> Report:
    """
    Indecomposables of Q-hat over each positive root of Gamma

    The modules X with h(dim X) = alpha are the twists of any one of them
    under the induced action, one per root in the fiber.

    Raises:
        NotFiniteTypeError: If Q-hat is not a union of Dynkin quivers
    """
    mckay = fixture.mckay
    induced = mckay.induced
    if induced is None or not classify(fixture.A_hat).is_finite:
        raise NotFiniteTypeError("Fiber modules are built only for Dynkin McKay quivers")
    roots_hat = enumerate_roots(fixture.A_hat)
    roots_Gamma = enumerate_roots(fixture.folded)
    grouped: Dict[Tuple[int, ...], List[LatticeVector]] = {}
    for beta in roots_hat.positive_roots:
        grouped.setdefault(fixture.maps.h(beta).coefficients, []).append(beta)

    report = Report(command="verify fibers", fixture=fixture.name, seed=seed)
    rows, failures = [], []
    for alpha in roots_Gamma.positive_roots:
        members = grouped.get(alpha.coefficients, [])
        if not members:
            failures.append({"root": str(alpha), "reason": "empty fiber"})
            continue
        modules = {b.coefficients: indecomposable(mckay.quiver, b, induced.level) for b in members}
        first = modules[members[0].coefficients]
        reached = set()
        for g in induced.group.elements():
            image = twist(induced, g, first)
            target = modules.get(image.dimension_vector().coefficients)
            if target is not None and is_isomorphic(image, target, seed).isomorphic:
                reached.add(image.dimension_vector().coefficients)
        rows.append({"root": str(alpha), "modules": len(modules), "reached": len(reached)})
        if reached != set(modules):
            failures.append({"root": str(alpha), "modules": len(modules), "reached": len(reached)})
    report.checks.append(CheckRecord.of("fiber_modules_form_one_twist_orbit", not failures, witness=failures[:5]))
    report.data["fibers"] = rows
    logger.info(f"Fiber modules verified: fixture={fixture.name or '-'}, roots={len(rows)}, passed={report.passed}")
    return report
