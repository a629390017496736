"""
Lie Algebra Service Module

Minimal realizations, finite-type Lie algebras with exact structure
constants, lifted group actions, fixed-point subalgebras and the checks
identifying the folded algebra with the fixed points of the unfolded one.
"""

import logging
import random
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from app.config import settings
from app.core.exceptions import ConstructionMismatchError, NotFiniteTypeError
from app.models.cartan import CartanMatrix
from app.models.lattice import LatticeVector
from app.models.lie import Dense, FiniteLieAlgebra, LiftedAutomorphism, Realization, Subalgebra, Vector, add_into
from app.models.quiver import MonomialAction, Quiver
from app.schemas.report import CheckRecord, Report
from app.services.cartan_service import classify, corank, symmetrizer
from app.services.pipeline import FoldingFixture
from app.services.root_service import enumerate_roots
from app.utils.linalg import Rat, express_in_rref, nullspace, rank, rref, to_qq


logger = logging.getLogger(__name__)


def minimal_realization(C: CartanMatrix) -> Realization:
    """
    Minimal realization of a symmetrizable GCM

    h = Q^(2n - l): the first n coordinates carry the coroots, the roots
    are the columns of C completed by unit functionals on the last n - l
    coordinates, chosen greedily so that the roots become independent.

    Raises:
        NotSymmetrizableError: If C is not a symmetrizable GCM
    """
    symmetrizer(C)
    n = C.n
    l = rank(C.rows())
    columns = [list(row) for row in C.matrix]
    completion: List[int] = []
    current = l
    for k in range(n):
        if len(completion) == n - l:
            break
        unit = [1 if j == k else 0 for j in range(n)]
        candidate = rank(columns + [unit] + [[1 if j == c else 0 for j in range(n)] for c in completion])
        if candidate > current:
            completion.append(k)
            current = candidate

    dimension = 2 * n - l
    roots = tuple(
        tuple(to_qq(C.matrix[i][j]) for i in range(n))
        + tuple(QQ(1 if c == j else 0) for c in completion)
        for j in range(n)
    )
    coroots = tuple(
        tuple(QQ(1 if k == i else 0) for k in range(dimension))
        for i in range(n)
    )
    center = tuple(tuple(v) for v in nullspace([list(r) for r in roots], dimension))
    realization = Realization(cartan=C, dimension=dimension, coroots=coroots, roots=roots, center=center)
    logger.debug(f"Minimal realization: n={n}, rank={l}, dimension={dimension}, center={len(center)}")
    return realization


def orientation_matrix(A: CartanMatrix, quiver: Optional[Quiver] = None) -> List[List[int]]:
    """S = I + (arrow counts i -> j); without a quiver edges point from lower to higher index"""
    n = A.n
    S = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if quiver is None:
                S[i][j] = -A.matrix[i][j] if i < j else 0
            else:
                S[i][j] = len(quiver.arrows_between(A.index[i], A.index[j]))
    return S


def build_finite_lie_algebra(A: CartanMatrix, orientation: Optional[Quiver] = None) -> FiniteLieAlgebra:
    """
    Structure constants of g(A) for a symmetric finite-type GCM

    Raises:
        NotFiniteTypeError: If A is not symmetric or not of finite type
    """
    if not A.symmetric:
        raise NotFiniteTypeError("Brackets are built only for symmetric Cartan matrices")
    classification = classify(A)
    if not classification.is_finite:
        logger.error(f"Refusing bracket model: type={classification}")
        raise NotFiniteTypeError(f"Cartan matrix of type {classification} is not of finite type")

    positive = enumerate_roots(A).positive_roots
    S = orientation_matrix(A, orientation)
    algebra = FiniteLieAlgebra(A, positive, S, {})
    n = A.n
    table: Dict[Tuple[int, int], Vector] = {}
    for k, alpha in enumerate(algebra.roots):
        index = n + k
        for i in range(n):
            value = sum(a * x for a, x in zip(A.matrix[i], alpha.coefficients))
            if value:
                table[(i, index)] = {index: to_qq(value)}
                table[(index, i)] = {index: to_qq(-value)}
        for m, beta in enumerate(algebra.roots):
            total = alpha + beta
            if total.is_zero:
                table[(index, n + m)] = {i: to_qq(-a) for i, a in enumerate(alpha.coefficients) if a}
            elif algebra.has_root(total):
                table[(index, n + m)] = {algebra.root_index(total): to_qq(algebra.sign(alpha, beta))}
    algebra.table = table
    logger.info(f"Lie algebra built: type={classification}, dimension={algebra.dimension}")
    return algebra


def verify_lie_algebra(algebra: FiniteLieAlgebra, samples: Optional[int] = None, seed: Optional[int] = None) -> Report:
    """Antisymmetry, sampled Jacobi identity and the Serre relations"""
    samples = samples or settings.jacobi_samples
    seed = settings.random_seed if seed is None else seed
    rng = random.Random(seed)
    report = Report(command="verify algebra", fixture="", seed=seed)
    dim = algebra.dimension
    A = algebra.cartan

    failures = []
    for a in range(dim):
        for b in range(dim):
            forward = algebra.table.get((a, b), {})
            backward = algebra.table.get((b, a), {})
            if {k: -x for k, x in backward.items()} != forward:
                failures.append([algebra.label(a), algebra.label(b)])
    report.checks.append(CheckRecord.of("antisymmetry", not failures, witness=failures[:5]))

    failures = []
    for _ in range(samples):
        a, b, c = (algebra.basis_vector(rng.randrange(dim)) for _ in range(3))
        total: Vector = {}
        add_into(total, algebra.bracket(a, algebra.bracket(b, c)))
        add_into(total, algebra.bracket(b, algebra.bracket(c, a)))
        add_into(total, algebra.bracket(c, algebra.bracket(a, b)))
        if total:
            failures.append([algebra.label(next(iter(x))) for x in (a, b, c)])
    report.checks.append(CheckRecord.of("jacobi_identity", not failures, f"{samples} sampled triples", failures[:5]))

    failures = []
    for i in A.index:
        for j in A.index:
            a_ij = A.entry(i, j)
            expected = algebra.h(i) if i == j else {}
            if algebra.bracket(algebra.e(i), algebra.f(j)) != expected:
                failures.append(f"[E_{i}, F_{j}]")
            if algebra.bracket(algebra.h(i), algebra.e(j)) != {k: a_ij * x for k, x in algebra.e(j).items() if a_ij}:
                failures.append(f"[H_{i}, E_{j}]")
            if algebra.bracket(algebra.h(i), algebra.f(j)) != {k: -a_ij * x for k, x in algebra.f(j).items() if a_ij}:
                failures.append(f"[H_{i}, F_{j}]")
            if i != j:
                if algebra.ad_power(algebra.e(i), algebra.e(j), 1 - a_ij):
                    failures.append(f"(ad E_{i})^{1 - a_ij} E_{j}")
                if algebra.ad_power(algebra.f(i), algebra.f(j), 1 - a_ij):
                    failures.append(f"(ad F_{i})^{1 - a_ij} F_{j}")
    report.checks.append(CheckRecord.of("serre_relations", not failures, witness=failures[:5]))

    expected_dim = A.n + len(algebra.roots)
    report.checks.append(CheckRecord.of(
        "dimension", dim == expected_dim, witness={"dimension": dim, "expected": expected_dim},
    ))
    report.data["dimension"] = dim
    return report


def _permute_root(alpha: LatticeVector, permutation: Dict[str, str]) -> LatticeVector:
    return LatticeVector.from_mapping(alpha.index, {permutation[v]: a for v, a in alpha.to_dict().items()})


def bracket_failures(algebra: FiniteLieAlgebra, lift: LiftedAutomorphism) -> List[Tuple[str, str]]:
    """Basis pairs (a, b) with lift([a, b]) != [lift(a), lift(b)]"""
    failures = []
    for a in range(algebra.dimension):
        ia, sa = lift.images[a]
        for b in range(algebra.dimension):
            ib, sb = lift.images[b]
            left = lift.apply(algebra.table.get((a, b), {}))
            right = {k: sa * sb * x for k, x in algebra.table.get((ia, ib), {}).items()}
            if left != right:
                failures.append((algebra.label(a), algebra.label(b)))
    return failures


def lift_group_action(algebra: FiniteLieAlgebra, action: MonomialAction) -> List[LiftedAutomorphism]:
    """
    Lift each generator's vertex permutation to an automorphism of g

    Chevalley generators are permuted with sign +1; the sign on other
    root vectors is propagated by height through x_a = eps(a_i, b) [x_ai, x_b].

    Raises:
        ConstructionMismatchError: If a permutation does not preserve the
            Cartan matrix, or a lift fails to preserve the bracket or the
            group relations
    """
    A = algebra.cartan
    n = algebra.rank
    lifts = []
    for g in action.group.generators():
        permutation = action.element_action(g).vertex_perm
        for i in A.index:
            for j in A.index:
                if A.entry(permutation[i], permutation[j]) != A.entry(i, j):
                    raise ConstructionMismatchError(f"Permutation of {g} is not a Cartan matrix automorphism")

        eta: Dict[Tuple[int, ...], int] = {}
        for alpha in algebra.positive_roots:
            if alpha.height == 1:
                eta[alpha.coefficients] = 1
                eta[(-alpha).coefficients] = 1
                continue
            for i in A.index:
                simple = LatticeVector.simple(A.index, i)
                beta = alpha - simple
                if beta.is_positive and algebra.has_root(beta):
                    factor = algebra.sign(simple, beta) * algebra.sign(
                        _permute_root(simple, permutation), _permute_root(beta, permutation)
                    )
                    eta[alpha.coefficients] = factor * eta[beta.coefficients]
                    eta[(-alpha).coefficients] = factor * eta[(-beta).coefficients]
                    break

        images = [(A.index.index(permutation[name]), 1) for name in A.index]
        for alpha in algebra.roots:
            images.append((algebra.root_index(_permute_root(alpha, permutation)), eta[alpha.coefficients]))
        lift = LiftedAutomorphism(element=g, permutation=dict(permutation), eta=eta, images=tuple(images))

        failures = bracket_failures(algebra, lift)
        if failures:
            logger.error(f"Lift does not preserve the bracket: generator={g}, pairs={failures[:3]}")
            raise ConstructionMismatchError(f"Lift of {g} breaks the bracket at {failures[0]}")

        power = lift
        for _ in range(g.order() - 1):
            power = lift.compose(power)
        if not power.is_identity:
            raise ConstructionMismatchError(f"Lift of {g} does not have order {g.order()}")
        lifts.append(lift)

    for x in range(len(lifts)):
        for y in range(x + 1, len(lifts)):
            if lifts[x].compose(lifts[y]).images != lifts[y].compose(lifts[x]).images:
                raise ConstructionMismatchError("Lifted generators do not commute")

    logger.info(f"Group action lifted: generators={len(lifts)}, dimension={algebra.dimension}")
    return lifts


def fixed_subalgebra(algebra: FiniteLieAlgebra, lifts: Sequence[LiftedAutomorphism]) -> Subalgebra:
    """
    Simultaneous fixed space of the lifted automorphisms, with closure witness

    Raises:
        ConstructionMismatchError: If the fixed space is not closed under the bracket
    """
    dim = algebra.dimension
    rows: List[Dense] = []
    for lift in lifts:
        matrix = lift.matrix()
        for r in range(dim):
            rows.append([matrix[r][c] - (1 if r == c else 0) for c in range(dim)])
    basis = nullspace(rows, dim)
    fixed = Subalgebra.spanned_by(algebra, basis)

    vectors = fixed.basis()
    for a, u in enumerate(vectors):
        for b, v in enumerate(vectors):
            coordinates = fixed.coordinates(algebra.bracket(u, v))
            if coordinates is None:
                raise ConstructionMismatchError(f"Fixed space is not closed: basis pair ({a}, {b})")
            fixed.closure[(a, b)] = coordinates
    logger.info(f"Fixed subalgebra: dimension={fixed.dimension}, parent={dim}")
    return fixed


def generated_subalgebra(algebra: FiniteLieAlgebra, generators: Sequence[Vector]) -> Subalgebra:
    """Span of all iterated brackets of the generators"""
    dense: List[Dense] = []
    reduced, pivots = [], ()
    queue = []
    for g in generators:
        if g and express_in_rref(reduced, pivots, algebra.to_dense(g)) is None:
            dense.append(algebra.to_dense(g))
            reduced, pivots = rref(dense, algebra.dimension)
            queue.append(g)
    while queue:
        following = []
        for v in queue:
            for g in generators:
                w = algebra.bracket(g, v)
                if w and express_in_rref(reduced, pivots, algebra.to_dense(w)) is None:
                    dense.append(algebra.to_dense(w))
                    reduced, pivots = rref(dense, algebra.dimension)
                    following.append(w)
        queue = following
    return Subalgebra(algebra, reduced, pivots)


def _hat_kernel_action(kernel: List[Dense], pivots, permutation: Dict[str, str], index) -> List[List[Rat]]:
    """Matrix of the permutation on ker A-hat in the row-reduced kernel basis"""
    columns = []
    for k in kernel:
        moved = [QQ(0)] * len(index)
        for position, name in enumerate(index):
            moved[index.index(permutation[name])] = k[position]
        coordinates = express_in_rref(kernel, pivots, moved)
        if coordinates is None:
            raise ConstructionMismatchError("Kernel of the McKay Cartan matrix is not stable under G")
        columns.append(coordinates)
    return [[columns[c][r] for c in range(len(kernel))] for r in range(len(kernel))]


def verify_realization(fixture: FoldingFixture) -> Report:
    """
    Realization-level folding checks, valid for any symmetrizable C

    h-hat = Q^n-hat + ker A-hat with eps_j(x, y) = (A-hat x)_j + y_j is a
    G-equivariant minimal realization of A-hat. Inside it, the annihilator
    of eps_(i rho) - eps_(i rho') intersected with the G-fixed vectors must
    be a realization of C with coroots H_i = sum_rho H_(i rho) and roots
    eps_j = (d_j / |G|) sum_sigma eps_(j sigma).
    """
    A_hat = fixture.A_hat
    index = A_hat.index
    n_hat = A_hat.n
    folded = fixture.folded
    C = folded.C
    reps = folded.index
    order = fixture.group.order
    report = Report(command="verify realization", fixture=fixture.name)

    kernel, kernel_pivots = rref(nullspace(A_hat.rows(), n_hat), n_hat)
    dim = n_hat + len(kernel)

    def eps(name: str) -> Dense:
        j = index.index(name)
        return [to_qq(A_hat.matrix[j][i]) for i in range(n_hat)] + [k[j] for k in kernel]

    rows: List[Dense] = []
    for i in reps:
        fiber = fixture.mckay.fiber(i)
        for a, b in zip(fiber, fiber[1:]):
            rows.append([x - y for x, y in zip(eps(a), eps(b))])
    induced = fixture.mckay.induced
    for g in fixture.group.generators():
        permutation = induced.element_action(g).vertex_perm
        theta = [[QQ(0)] * dim for _ in range(dim)]
        for name in index:
            theta[index.index(permutation[name])][index.index(name)] = QQ(1)
        for r, row in enumerate(_hat_kernel_action(kernel, kernel_pivots, permutation, index)):
            for c, x in enumerate(row):
                theta[n_hat + r][n_hat + c] = x
        for r in range(dim):
            rows.append([theta[r][c] - (1 if r == c else 0) for c in range(dim)])
    fixed_basis = nullspace(rows, dim) if rows else [
        [QQ(1 if c == r else 0) for c in range(dim)] for r in range(dim)
    ]
    fixed_reduced, fixed_pivots = rref(fixed_basis, dim) if fixed_basis else ([], ())

    expected_dim = len(reps) + corank(C)
    minimal = minimal_realization(C)
    report.checks.append(CheckRecord.of(
        "fixed_coroot_space_dimension",
        len(fixed_basis) == expected_dim == minimal.dimension,
        witness={"fixed": len(fixed_basis), "expected": expected_dim, "minimal": minimal.dimension},
    ))

    coroot = {}
    for i in reps:
        vector = [QQ(0)] * dim
        for name in fixture.mckay.fiber(i):
            vector[index.index(name)] = QQ(1)
        coroot[i] = vector
    inside = all(express_in_rref(fixed_reduced, fixed_pivots, coroot[i]) is not None for i in reps)
    independent = rank([coroot[i] for i in reps], dim) == len(reps)
    report.checks.append(CheckRecord.of(
        "folded_coroots_in_fixed_space", inside and independent,
        witness={"inside": inside, "independent": independent},
    ))

    root = {}
    for j in reps:
        scale = QQ(folded.d(j), order)
        functional = [QQ(0)] * dim
        for name in fixture.mckay.fiber(j):
            functional = [f + scale * x for f, x in zip(functional, eps(name))]
        root[j] = functional

    def value(functional: Dense, H: Dense) -> Rat:
        return sum((a * b for a, b in zip(functional, H)), QQ(0))

    failures = [
        {"i": i, "j": j, "value": str(value(root[j], coroot[i])), "c_ij": C.entry(i, j)}
        for i in reps for j in reps
        if value(root[j], coroot[i]) != C.entry(i, j)
    ]
    report.checks.append(CheckRecord.of("folded_pairing_is_cartan", not failures, witness=failures[:5]))

    restricted = [[value(root[j], b) for b in fixed_basis] for j in reps]
    report.checks.append(CheckRecord.of(
        "folded_roots_independent", rank(restricted, len(fixed_basis)) == len(reps) if fixed_basis else not reps,
    ))

    failures = []
    for i in reps:
        for j in reps:
            left = QQ(folded.B.entry(i, j), folded.d(i) * folded.d(j))
            right = QQ(sum(
                A_hat.entry(a, b) for a in fixture.mckay.fiber(i) for b in fixture.mckay.fiber(j)
            ), order)
            if left != right:
                failures.append({"i": i, "j": j, "gamma": str(left), "hat": str(right)})
    report.checks.append(CheckRecord.of("coroot_form_scaling", not failures, witness=failures[:5]))

    report.data.update({
        "hat_realization_dimension": dim,
        "fixed_coroot_dimension": len(fixed_basis),
        "minimal_realization_dimension": minimal.dimension,
        "center_dimension": len(minimal.center),
    })
    logger.info(f"Realization verified: fixture={fixture.name or '-'}, passed={report.passed}")
    return report


def _sum(vectors: Sequence[Vector]) -> Vector:
    total: Vector = {}
    for v in vectors:
        add_into(total, v)
    return total


def _scaled(v: Vector, c: int) -> Vector:
    return {k: c * x for k, x in v.items() if c}


def verify_fixed_point_algebra(fixture: FoldingFixture, seed: Optional[int] = None) -> Report:
    """
    The fixed points of g(Q-hat) under the lifted group form g(Gamma)

    (a) folded generators are fixed and satisfy the relations for C,
    (b) realization checks, (c) dimension equality and generation,
    (d) weight spaces over the fixed Cartan part, (e) ad-nilpotency.

    Raises:
        NotFiniteTypeError: If Q is not a union of Dynkin quivers
    """
    if not classify(fixture.A).is_finite:
        raise NotFiniteTypeError("Fixed-point comparison needs a union of Dynkin quivers")
    seed = settings.random_seed if seed is None else seed
    algebra = build_finite_lie_algebra(fixture.A_hat, fixture.mckay.quiver)
    lifts = lift_group_action(algebra, fixture.mckay.induced)
    fixed = fixed_subalgebra(algebra, lifts)
    C = fixture.C
    reps = fixture.folded.index
    fiber = fixture.mckay.fiber

    report = Report(command="verify thm1.2", fixture=fixture.name, seed=seed)
    report.extend(verify_lie_algebra(algebra, seed=seed), prefix="algebra.")
    report.checks.append(CheckRecord.of("lifts_preserve_bracket", True, f"{len(lifts)} generators, all basis pairs"))

    X = {i: _sum([algebra.e(v) for v in fiber(i)]) for i in reps}
    Y = {i: _sum([algebra.f(v) for v in fiber(i)]) for i in reps}
    H = {i: _sum([algebra.h(v) for v in fiber(i)]) for i in reps}

    failures = []
    for i in reps:
        for name, element in (("X", X[i]), ("Y", Y[i]), ("H", H[i])):
            if element not in fixed:
                failures.append(f"{name}_{i} not fixed")
        for j in reps:
            c_ij = C.entry(i, j)
            if algebra.bracket(X[i], Y[j]) != (H[i] if i == j else {}):
                failures.append(f"[X_{i}, Y_{j}]")
            if algebra.bracket(H[i], X[j]) != _scaled(X[j], c_ij):
                failures.append(f"[H_{i}, X_{j}]")
            if algebra.bracket(H[i], Y[j]) != _scaled(Y[j], -c_ij):
                failures.append(f"[H_{i}, Y_{j}]")
            if i != j:
                if algebra.ad_power(X[i], X[j], 1 - c_ij):
                    failures.append(f"(ad X_{i})^{1 - c_ij} X_{j}")
                if algebra.ad_power(Y[i], Y[j], 1 - c_ij):
                    failures.append(f"(ad Y_{i})^{1 - c_ij} Y_{j}")
    report.checks.append(CheckRecord.of("folded_generator_relations", not failures, witness=failures[:5]))

    report.extend(verify_realization(fixture), prefix="realization.")

    roots_Gamma = enumerate_roots(C)
    expected = 2 * len(roots_Gamma) + len(reps) + corank(C)
    generated = generated_subalgebra(algebra, list(X.values()) + list(Y.values()))
    generated_inside = all(v in fixed for v in generated.basis())
    report.checks.append(CheckRecord.of(
        "fixed_dimension_matches_gamma", fixed.dimension == expected,
        witness={"fixed": fixed.dimension, "gamma": expected},
    ))
    report.checks.append(CheckRecord.of(
        "folded_generators_generate", generated_inside and generated.dimension == fixed.dimension,
        witness={"generated": generated.dimension, "fixed": fixed.dimension},
    ))

    groups: Dict[Tuple[int, ...], List[int]] = {}
    zero = tuple(0 for _ in reps)
    for k in range(algebra.dimension):
        alpha = algebra.root_of(k)
        key = zero if alpha is None else fixture.maps.h(alpha).coefficients
        groups.setdefault(key, []).append(k)
    weights = {}
    for key, positions in groups.items():
        projected = [[row[p] for p in positions] for row in fixed.rows]
        weights[key] = rank(projected, len(positions)) if projected else 0
    gamma_keys = {a.coefficients for a in roots_Gamma.positive_roots}
    gamma_keys |= {(-a).coefficients for a in roots_Gamma.positive_roots}
    nonzero = {key for key in groups if key != zero}
    weight_ok = (
        sum(weights.values()) == fixed.dimension
        and weights.get(zero, 0) == len(reps) + corank(C)
        and nonzero == gamma_keys
        and all(weights[key] == 1 for key in nonzero)
    )
    report.checks.append(CheckRecord.of(
        "weight_spaces", weight_ok,
        witness={str(k): v for k, v in weights.items()},
    ))

    failures = []
    for element_name, family in (("X", X), ("Y", Y)):
        for i, element in family.items():
            for v in fixed.basis():
                if algebra.ad_power(element, v, fixed.dimension):
                    failures.append(f"ad {element_name}_{i}")
                    break
    report.checks.append(CheckRecord.of("ad_nilpotent", not failures, witness=failures[:5]))

    report.data.update({
        "algebra_dimension": algebra.dimension,
        "fixed_dimension": fixed.dimension,
        "gamma_dimension": expected,
        "gamma_type": str(classify(C)),
        "hat_type": str(classify(fixture.A_hat)),
        "weight_spaces": len(weights),
    })
    logger.info(
        f"Fixed points checked: fixture={fixture.name or '-'}, algebra={algebra.dimension}, "
        f"fixed={fixed.dimension}, gamma={expected}, passed={report.passed}"
    )
    return report
