"""
Root Service Module

Reflections, bounded root enumeration, folding maps and the root-level
checks of the folding correspondence.
"""

import itertools
import logging
import random
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx

from app.config import settings
from app.core.exceptions import LatticeMismatchError
from app.models.cartan import CartanMatrix, ValuedGraphData
from app.models.lattice import BilinearForm, LatticeVector
from app.models.mckay import McKayQuiver
from app.models.quiver import MonomialAction, OrbitData
from app.models.roots import FoldingMaps, ImaginaryRoot, RealRoot, RootSystemView, root_order
from app.schemas.report import CheckRecord, CheckStatus, Report
from app.services.cartan_service import classify, dynkin_graph
from app.services.pipeline import FoldingFixture


logger = logging.getLogger(__name__)

RootData = Union[CartanMatrix, BilinearForm, ValuedGraphData]

# box sweeps above this many cases fall back to seeded sampling
EXHAUSTIVE_LIMIT = 20000


def as_cartan(data: RootData) -> CartanMatrix:
    """GCM with c_ij = b_ij / d_i for forms and folded data"""
    if isinstance(data, CartanMatrix):
        return data
    if isinstance(data, ValuedGraphData):
        return data.C
    return CartanMatrix.from_rows(data.index, data.cartan_rows())


def reflect(data: RootData, i: str, v: LatticeVector) -> LatticeVector:
    """
    r_i(v) = v - (sum_j c_ij v_j) e_i

    On a symmetric A this is v - (v, e_i) e_i; on folded data it is the
    twisted reflection v - (1/d_i)(v, e_i)_B e_i.

    Raises:
        LatticeMismatchError: If i or v is not on the lattice of data
    """
    C = as_cartan(data)
    if i not in C.index:
        raise LatticeMismatchError(f"{i} is not a simple root of this lattice")
    if v.index != C.index:
        raise LatticeMismatchError("Vector does not live on this lattice")
    k = C.index.index(i)
    pairing = sum(c * a for c, a in zip(C.matrix[k], v.coefficients))
    if not pairing:
        return v
    coefficients = list(v.coefficients)
    coefficients[k] -= pairing
    return LatticeVector(v.index, tuple(coefficients))


def reflect_word(data: RootData, word: Sequence[str], v: LatticeVector) -> LatticeVector:
    """Apply the reflections of word left to right"""
    for i in word:
        v = reflect(data, i, v)
    return v


def composite_reflection(data: RootData, vertices: Sequence[str], v: LatticeVector) -> LatticeVector:
    """Product of the simple reflections at pairwise orthogonal vertices"""
    return reflect_word(data, vertices, v)


def orbit_reflection(fixture: FoldingFixture, i: str, v: LatticeVector) -> LatticeVector:
    """S_i on ZI: product over the orbit of the representative i"""
    return composite_reflection(fixture.A, fixture.orbit_data.orbits[i], v)


def fiber_reflection(fixture: FoldingFixture, i: str, v: LatticeVector) -> LatticeVector:
    """S-hat_i on Z I-hat: product over the vertices (i, rho)"""
    return composite_reflection(fixture.A_hat, fixture.mckay.fiber(i), v)


def folded_reflection(fixture: FoldingFixture, i: str, v: LatticeVector) -> LatticeVector:
    """gamma_i on ZR"""
    return reflect(fixture.folded, i, v)


def _weight_vectors(n: int, total: int) -> Iterator[Tuple[int, ...]]:
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _weight_vectors(n - 1, total - first):
            yield (first,) + rest


def fundamental_set(C: CartanMatrix, height: int) -> List[LatticeVector]:
    """
    Positive vectors of height <= height with connected support and
    sum_j c_ij v_j <= 0 for every i
    """
    graph = dynkin_graph(C)
    result = []
    for total in range(1, height + 1):
        for coefficients in _weight_vectors(C.n, total):
            if any(sum(c * a for c, a in zip(row, coefficients)) > 0 for row in C.matrix):
                continue
            support = [k for k, a in enumerate(coefficients) if a]
            if not nx.is_connected(graph.subgraph(support)):
                continue
            result.append(LatticeVector(C.index, coefficients))
    return result


def enumerate_roots(data: RootData, height: Optional[int] = None) -> RootSystemView:
    """
    Positive roots of a symmetrizable GCM up to a height bound

    Real roots come from a breadth first search over reflections of the
    simple roots. Finite type ignores the bound and saturates. Imaginary
    roots are Weyl images of the fundamental set inside the height box.

    Raises:
        NotSymmetrizableError: If the matrix is not a symmetrizable GCM
    """
    C = as_cartan(data)
    finite = classify(C).is_finite
    bound = None if finite else (height or settings.default_height)

    found: Dict[Tuple[int, ...], RealRoot] = {}
    frontier = []
    for name in C.index:
        root = RealRoot(LatticeVector.simple(C.index, name), name)
        found[root.vector.coefficients] = root
        frontier.append(root)
    level = 0
    while frontier:
        level += 1
        following = []
        for root in frontier:
            for i in C.index:
                w = reflect(C, i, root.vector)
                if not w.is_positive or w.coefficients in found:
                    continue
                if bound is not None and w.height > bound:
                    continue
                image = RealRoot(w, root.simple, root.word + (i,))
                found[w.coefficients] = image
                following.append(image)
        frontier = following
        logger.debug(f"Real root search level {level}: new={len(frontier)}")

    imaginary: Dict[Tuple[int, ...], ImaginaryRoot] = {}
    if not finite:
        queue = []
        for v in fundamental_set(C, bound):
            root = ImaginaryRoot(v, v)
            imaginary[v.coefficients] = root
            queue.append(root)
        while queue:
            following = []
            for root in queue:
                for i in C.index:
                    w = reflect(C, i, root.vector)
                    if w.height > bound or w.coefficients in imaginary:
                        continue
                    image = ImaginaryRoot(w, root.ancestor, root.word + (i,))
                    imaginary[w.coefficients] = image
                    following.append(image)
            queue = following

    view = RootSystemView(
        index=C.index,
        height_bound=bound,
        real=tuple(sorted(found.values(), key=lambda r: root_order(r.vector))),
        imaginary=tuple(sorted(imaginary.values(), key=lambda r: root_order(r.vector))),
        finite=finite,
        complete=finite,
    )
    logger.info(
        f"Roots enumerated: rank={C.n}, real={len(view.real)}, imaginary={len(view.imaginary)}, "
        f"finite={finite}, height_bound={bound}"
    )
    return view


def fold_maps(action: MonomialAction, orbit_data: OrbitData, mckay: McKayQuiver) -> FoldingMaps:
    return FoldingMaps(action, orbit_data, mckay)


def _box(index: Sequence[str], radius: int) -> List[LatticeVector]:
    span = range(-radius, radius + 1)
    return [LatticeVector(tuple(index), c) for c in itertools.product(span, repeat=len(index))]


def _vectors(index: Sequence[str], radius: int, samples: int, rng: random.Random) -> Tuple[List[LatticeVector], str]:
    """
    Simple roots followed by the coefficient box, or seeded samples from it

    The identities below are Z-linear in each argument, so passing on the
    simple roots covers every box.
    """
    basis = [LatticeVector.simple(index, name) for name in index]
    if (2 * radius + 1) ** len(index) <= EXHAUSTIVE_LIMIT:
        return basis + _box(index, radius), "basis + exhaustive box"
    vectors = [
        LatticeVector(tuple(index), tuple(rng.randint(-radius, radius) for _ in index))
        for _ in range(samples)
    ]
    return basis + vectors, "basis + sampled box"


def _pairs(items: List, basis_count: int, samples: int, rng: random.Random):
    """All pairs of the leading basis items, then box pairs or seeded samples of them"""
    pairs = list(itertools.product(items[:basis_count], repeat=2))
    rest = items[basis_count:]
    if len(rest) ** 2 <= EXHAUSTIVE_LIMIT:
        return pairs + list(itertools.product(rest, repeat=2)), "basis pairs + exhaustive box"
    return pairs + [(rng.choice(rest), rng.choice(rest)) for _ in range(samples)], "basis pairs + sampled box"


def _record(report: Report, name: str, failures: List, detail: str = "") -> None:
    report.checks.append(CheckRecord.of(name, not failures, detail, witness=failures[:5]))


def verify_folding_identities(
    fixture: FoldingFixture,
    samples: Optional[int] = None,
    box: Optional[int] = None,
    seed: Optional[int] = None,
) -> Report:
    """
    Lattice identities relating Q, Gamma and Q-hat

    Every identity is checked on the simple roots and on all pairs of them,
    then across the coefficient box, exhaustively when it is small enough
    and on seeded random samples otherwise.
    """
    samples = samples or settings.form_samples
    radius = box if box is not None else settings.identity_box
    seed = settings.random_seed if seed is None else seed
    rng = random.Random(seed)
    maps = fixture.maps
    reps = fixture.orbit_data.representatives
    form_Q, form_Gamma, form_hat = fixture.form_Q, fixture.form_Gamma, fixture.form_hat
    report = Report(command="verify folding", fixture=fixture.name, seed=seed)

    folded_box, box_mode = _vectors(reps, radius, samples, rng)
    fixed = [maps.f_inverse(w) for w in folded_box]
    pairs, pair_mode = _pairs(list(zip(folded_box, fixed)), len(reps), samples, rng)

    failures = []
    for (w1, v1), (w2, v2) in pairs:
        if form_Q.pair(v1, v2) != form_Gamma.pair(w1, w2):
            failures.append({"alpha": str(v1), "beta": str(v2)})
    _record(report, "fixed_form_matches_folded_form", failures, pair_mode)

    failures = []
    for (w1, v1), (w2, v2) in pairs:
        if maps.f(v1 + v2) != w1 + w2 or maps.f(v1) != w1:
            failures.append({"alpha": str(v1), "beta": str(v2)})
    _record(report, "f_is_lattice_isomorphism", failures, pair_mode)

    failures = []
    for w, v in zip(folded_box, fixed):
        for i in reps:
            moved = orbit_reflection(fixture, i, v)
            if not maps.is_fixed(moved) or maps.f(moved) != folded_reflection(fixture, i, w):
                failures.append({"i": i, "alpha": str(v)})
    _record(report, "orbit_reflection_folds_to_gamma", failures, box_mode)

    basis_Q = form_Q.basis()
    failures = []
    for i in reps:
        orbit = fixture.orbit_data.orbits[i]
        for v in basis_Q:
            if composite_reflection(fixture.A, orbit, v) != composite_reflection(fixture.A, orbit[::-1], v):
                failures.append({"i": i, "vector": str(v)})
    _record(report, "orbit_reflection_order_independent", failures)

    failures = []
    for i in reps:
        for g in fixture.group.generators():
            for v in basis_Q:
                if orbit_reflection(fixture, i, maps.act(g, v)) != maps.act(g, orbit_reflection(fixture, i, v)):
                    failures.append({"i": i, "g": str(g), "vector": str(v)})
    _record(report, "orbit_reflection_centralizes_group", failures)

    hat_vectors, hat_mode = _vectors(maps.index_hat, radius, samples, rng)
    failures = []
    for beta in hat_vectors:
        h_beta = maps.h(beta)
        for i in reps:
            left = form_Gamma.pair(h_beta, form_Gamma.simple(i))
            right = fixture.folded.d(i) * sum(
                form_hat.pair(beta, form_hat.simple(name)) for name in fixture.mckay.fiber(i)
            )
            if left != right:
                failures.append({"i": i, "beta": str(beta)})
    _record(report, "fiber_sum_pairing", failures, hat_mode)

    failures = []
    for beta in hat_vectors:
        for i in reps:
            if maps.h(fiber_reflection(fixture, i, beta)) != folded_reflection(fixture, i, maps.h(beta)):
                failures.append({"i": i, "beta": str(beta)})
    _record(report, "fiber_reflection_folds_to_gamma", failures, hat_mode)

    q_vectors, _ = _vectors(form_Q.index, radius, samples, rng)
    q_pairs, q_mode = _pairs(q_vectors, len(form_Q.index), samples, rng)
    failures = []
    for v, w in q_pairs:
        for i in form_Q.index:
            rv, rw = reflect(fixture.A, i, v), reflect(fixture.A, i, w)
            if form_Q.pair(rv, rw) != form_Q.pair(v, w) or reflect(fixture.A, i, rv) != v:
                failures.append({"i": i, "v": str(v), "w": str(w)})
    _record(report, "reflections_preserve_form_Q", failures, q_mode)

    failures = []
    for (v, _), (w, _) in pairs:
        for i in reps:
            rv, rw = folded_reflection(fixture, i, v), folded_reflection(fixture, i, w)
            if form_Gamma.pair(rv, rw) != form_Gamma.pair(v, w) or folded_reflection(fixture, i, rv) != v:
                failures.append({"i": i, "v": str(v), "w": str(w)})
    _record(report, "reflections_preserve_form_Gamma", failures, pair_mode)

    logger.info(f"Folding identities verified: fixture={fixture.name or '-'}, passed={report.passed}")
    return report


def fibers(fixture: FoldingFixture, roots_hat: RootSystemView) -> Dict[Tuple[int, ...], List[LatticeVector]]:
    """Positive Q-hat roots grouped by their image under h"""
    grouped: Dict[Tuple[int, ...], List[LatticeVector]] = {}
    for beta in roots_hat.positive_roots:
        grouped.setdefault(fixture.maps.h(beta).coefficients, []).append(beta)
    return grouped


def verify_root_correspondence(fixture: FoldingFixture, height: Optional[int] = None) -> Report:
    """
    Root-level correspondence between Q-hat and Gamma

    h sends positive Q-hat roots into positive Gamma roots and every
    positive Gamma root has a fiber; over a real root the fiber is one
    orbit of real roots under the induced action, and its size is the
    number of indecomposables lying over that root. On the Q side each
    real Gamma root is pi of a real root beta with
    (sigma(beta), sigma(beta))_Q / 2 = [G : H_beta].
    """
    maps = fixture.maps
    roots_Q = enumerate_roots(fixture.A, height)
    roots_Gamma = enumerate_roots(fixture.folded, height)
    roots_hat = enumerate_roots(fixture.A_hat, height)
    complete = roots_Q.complete and roots_Gamma.complete and roots_hat.complete
    report = Report(command="verify thm1.1", fixture=fixture.name)

    grouped = fibers(fixture, roots_hat)
    outside = [str(beta) for key, members in grouped.items() for beta in members
               if LatticeVector(roots_Gamma.index, key) not in roots_Gamma]
    _record(report, "h_maps_roots_to_roots", outside)

    empty = [str(alpha) for alpha in roots_Gamma.positive_roots if alpha.coefficients not in grouped]
    if empty:
        status = CheckStatus.FAIL
    elif complete:
        status = CheckStatus.PASS
    else:
        status = CheckStatus.INCONCLUSIVE
    report.checks.append(CheckRecord(
        name="h_surjective",
        status=status,
        detail="complete" if complete else f"verified up to height {roots_Gamma.height_bound}",
        witness=empty[:5] if empty else None,
    ))

    fiber_rows = []
    orbit_failures = []
    for alpha in roots_Gamma.positive_roots:
        members = grouped.get(alpha.coefficients, [])
        real = roots_Gamma.is_real(alpha)
        row = {"root": alpha.to_dict(), "label": str(alpha), "real": real, "fiber": len(members)}
        if real and members:
            orbit = {v.coefficients for v in maps.orbit_hat(members[0])}
            single = orbit == {v.coefficients for v in members}
            all_real = all(roots_hat.is_real(v) for v in members)
            row["orbits"] = 1 if single else None
            if not (single and all_real):
                orbit_failures.append({"root": str(alpha), "fiber": [str(v) for v in members]})
        fiber_rows.append(row)
    _record(report, "real_fibers_are_single_orbits", orbit_failures)

    images: Dict[Tuple[int, ...], LatticeVector] = {}
    for beta in roots_Q.real_vectors:
        images.setdefault(maps.pi(beta).coefficients, beta)
    uncovered = [str(a) for a in roots_Gamma.positive_roots if a.coefficients not in images]
    if not uncovered:
        status = CheckStatus.PASS
    elif complete:
        status = CheckStatus.FAIL
    else:
        status = CheckStatus.INCONCLUSIVE
    report.checks.append(CheckRecord(
        name="pi_surjective", status=status, witness=uncovered[:5] if uncovered else None,
    ))

    count_failures = []
    order = fixture.group.order
    for alpha in roots_Gamma.positive_roots:
        if not roots_Gamma.is_real(alpha) or alpha.coefficients not in images:
            continue
        beta = images[alpha.coefficients]
        lifted = maps.f_inverse(alpha)
        stabilizer = maps.stabilizer(beta)
        if lifted != maps.sigma(beta) or fixture.form_Q.norm(lifted) != 2 * (order // stabilizer.order):
            count_failures.append({"root": str(alpha), "beta": str(beta), "stabilizer": stabilizer.order})
    _record(report, "orbit_sum_summand_count", count_failures)

    report.data.update({
        "positive_roots_Q": len(roots_Q),
        "positive_roots_Gamma": len(roots_Gamma),
        "positive_roots_Q_hat": len(roots_hat),
        "gamma_roots": [str(a) for a in roots_Gamma.positive_roots],
        "fibers": fiber_rows,
        "fiber_total": sum(r["fiber"] for r in fiber_rows),
        "complete": complete,
    })
    logger.info(
        f"Root correspondence verified: fixture={fixture.name or '-'}, gamma_roots={len(roots_Gamma)}, "
        f"hat_roots={len(roots_hat)}, passed={report.passed}"
    )
    return report
