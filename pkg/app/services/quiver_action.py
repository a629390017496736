"""
Quiver Action Service Module

Validation of monomial actions, orbit and stabilizer extraction.
"""

import logging
from collections import deque
from typing import Dict, List, Set, Tuple

from app.core.exceptions import InvalidActionError
from app.models.group import GroupElement, Subgroup
from app.models.quiver import ArrowOrbit, ElementAction, MonomialAction, OrbitData, Quiver
from app.schemas.report import ValidationReport, Violation, ViolationKind


logger = logging.getLogger(__name__)


def act(action: MonomialAction, g: GroupElement, arrow_id: str) -> Tuple[str, int]:
    """
    Image of an arrow under g as (arrow id, exponent k), meaning zeta_L^k * arrow

    Raises:
        UnknownArrowError: If the arrow id is not in the quiver
    """
    return action.act(g, arrow_id)


def validate_action(quiver: Quiver, action: MonomialAction) -> ValidationReport:
    """
    Check that a monomial action is a valid admissible group action

    Args:
        quiver: Quiver Q
        action: Action given on the factor generators

    Returns:
        ValidationReport listing every violated condition with a witness
    """
    violations: List[Violation] = []

    for a in quiver.loops():
        violations.append(Violation(
            kind=ViolationKind.LOOP,
            message=f"Arrow {a.id} is a loop at {a.source}",
            witness={"arrow": a.id},
        ))

    structural_ok = True
    for j, gen in enumerate(action.generators):
        structural_ok &= _check_generator_shape(quiver, j, gen.vertex_perm, gen.arrow_map, violations)

    if structural_ok:
        steps = [action.generator_action(j) for j in range(action.group.rank)]
        _check_relations(action, steps, violations)
        _check_commutation(action, steps, violations)

    valid = not violations
    admissible = True
    if valid:
        orbit_of = _vertex_orbits(quiver, action)
        for a in quiver.arrows:
            if a.source != a.target and orbit_of[a.source] == orbit_of[a.target]:
                admissible = False
                violations.append(Violation(
                    kind=ViolationKind.ADMISSIBILITY,
                    message=f"Arrow {a.id} joins {a.source} and {a.target} in one orbit",
                    witness={"arrow": a.id, "source": a.source, "target": a.target},
                ))
        _check_diagonal(quiver, action, violations)
        valid = not any(v.kind == ViolationKind.NOT_DIAGONAL for v in violations)

    report = ValidationReport(valid=valid, admissible=admissible, violations=violations)
    logger.info(
        f"Action validated: valid={report.valid}, admissible={report.admissible}, "
        f"violations={len(violations)}"
    )
    return report


def _check_generator_shape(quiver, j, vertex_perm, arrow_map, violations) -> bool:
    ok = True
    vertices = set(quiver.vertices)
    if set(vertex_perm) != vertices or set(vertex_perm.values()) != vertices:
        violations.append(Violation(
            kind=ViolationKind.VERTEX_PERMUTATION,
            message=f"Generator {j} does not permute the vertex set",
            witness={"generator": j},
        ))
        return False

    arrows = set(quiver.arrow_ids)
    images = [image for image, _ in arrow_map.values()]
    if set(arrow_map) != arrows or set(images) != arrows or len(images) != len(set(images)):
        violations.append(Violation(
            kind=ViolationKind.ARROW_MAP,
            message=f"Generator {j} does not permute the arrow set",
            witness={"generator": j},
        ))
        return False

    for arrow_id, (image_id, _) in arrow_map.items():
        a, b = quiver.arrow(arrow_id), quiver.arrow(image_id)
        if vertex_perm[a.source] != b.source or vertex_perm[a.target] != b.target:
            ok = False
            violations.append(Violation(
                kind=ViolationKind.ENDPOINT_MISMATCH,
                message=f"Generator {j} sends {arrow_id} to {image_id} with incompatible endpoints",
                witness={"generator": j, "arrow": arrow_id, "image": image_id},
            ))
    return ok


def _check_relations(action: MonomialAction, steps: List[ElementAction], violations) -> None:
    for j, step in enumerate(steps):
        power = action.identity_action()
        for _ in range(action.group.orders[j]):
            power = step.compose(power, action.level)
        if not power.is_identity:
            moved = {a: list(v) for a, v in power.arrow_map.items() if v != (a, 0)}
            violations.append(Violation(
                kind=ViolationKind.RELATION,
                message=f"Generator {j} raised to its order {action.group.orders[j]} is not the identity",
                witness={"generator": j, "arrows": moved},
            ))


def _check_commutation(action: MonomialAction, steps: List[ElementAction], violations) -> None:
    for j in range(len(steps)):
        for k in range(j + 1, len(steps)):
            left = steps[j].compose(steps[k], action.level)
            right = steps[k].compose(steps[j], action.level)
            if left != right:
                violations.append(Violation(
                    kind=ViolationKind.COMMUTATION,
                    message=f"Generators {j} and {k} do not commute",
                    witness={"generators": [j, k]},
                ))


def _check_diagonal(quiver: Quiver, action: MonomialAction, violations) -> None:
    """Elements fixing both endpoints of an arrow must scale it"""
    for g in action.group.elements():
        element = action.element_action(g)
        for a in quiver.arrows:
            if element.vertex_perm[a.source] == a.source and element.vertex_perm[a.target] == a.target:
                image, _ = element.arrow_map[a.id]
                if image != a.id:
                    violations.append(Violation(
                        kind=ViolationKind.NOT_DIAGONAL,
                        message=(
                            f"{g} fixes {a.source} and {a.target} but moves {a.id} to {image}; "
                            f"diagonalize the action on parallel arrows first"
                        ),
                        witness={"element": list(g.exponents), "arrow": a.id, "image": image},
                    ))


def _vertex_orbits(quiver: Quiver, action: MonomialAction) -> Dict[str, str]:
    """Map each vertex to the first vertex (in quiver order) of its orbit"""
    orbit_of: Dict[str, str] = {}
    for v in quiver.vertices:
        if v in orbit_of:
            continue
        for g in action.group.elements():
            orbit_of.setdefault(action.act_vertex(g, v), v)
    return orbit_of


def compute_orbits(quiver: Quiver, action: MonomialAction) -> OrbitData:
    """
    Orbits, representatives, transporters and stabilizers

    Representatives are chosen by breadth first search from the first
    vertex: the first neighbour (in vertex order) of an already chosen
    representative lying in a new orbit becomes that orbit's representative.
    Transporters are the lexicographically smallest elements moving the
    representative to the vertex.

    Raises:
        InvalidActionError: If the action is not valid and admissible
    """
    report = validate_action(quiver, action)
    if not report.ok:
        logger.error(f"Cannot compute orbits of invalid action: violations={len(report.violations)}")
        raise InvalidActionError("Action is not a valid admissible monomial action", report)

    elements = action.group.elements()
    orbit_members: Dict[str, Set[str]] = {}
    for v in quiver.vertices:
        orbit_members[v] = {action.act_vertex(g, v) for g in elements}

    representatives: List[str] = []
    orbit_of: Dict[str, str] = {}

    def assign(rep: str) -> None:
        representatives.append(rep)
        for w in orbit_members[rep]:
            orbit_of[w] = rep

    for start in quiver.vertices:
        if start in orbit_of:
            continue
        assign(start)
        queue = deque([start])
        while queue:
            rep = queue.popleft()
            for w in quiver.neighbors(rep):
                if w not in orbit_of:
                    assign(w)
                    queue.append(w)

    order = quiver.index.__getitem__
    orbits = {rep: tuple(sorted(orbit_members[rep], key=order)) for rep in representatives}

    transporters: Dict[str, GroupElement] = {}
    stabilizers: Dict[str, Subgroup] = {}
    for v in quiver.vertices:
        rep = orbit_of[v]
        transporters[v] = next(g for g in elements if action.act_vertex(g, rep) == v)
        stabilizers[v] = Subgroup(action.group, [g for g in elements if action.act_vertex(g, v) == v])

    arrow_orbits = _arrow_orbits(quiver, action, orbit_of)
    pair_reps = _pair_orbit_representatives(representatives, orbits, stabilizers, action, order)

    data = OrbitData(
        representatives=tuple(representatives),
        orbit_of=orbit_of,
        orbits=orbits,
        transporters=transporters,
        stabilizers=stabilizers,
        arrow_orbits=arrow_orbits,
        pair_orbit_representatives=pair_reps,
    )
    logger.info(
        f"Orbits computed: representatives={len(representatives)}, "
        f"arrow_orbits={len(arrow_orbits)}, group_order={action.group.order}"
    )
    logger.debug(f"Orbit sizes: {[len(orbits[r]) for r in representatives]}")
    return data


def _arrow_orbits(quiver: Quiver, action: MonomialAction, orbit_of: Dict[str, str]) -> Tuple[ArrowOrbit, ...]:
    arrow_order = {a.id: k for k, a in enumerate(quiver.arrows)}
    seen: Set[str] = set()
    result = []
    for a in quiver.arrows:
        if a.id in seen:
            continue
        members = sorted({action.act(g, a.id)[0] for g in action.group.elements()}, key=arrow_order.__getitem__)
        seen.update(members)
        target_rep = orbit_of[a.target]
        representative = next(m for m in members if quiver.arrow(m).target == target_rep)
        result.append(ArrowOrbit(
            representative=representative,
            members=tuple(members),
            source_orbit=orbit_of[a.source],
            target_orbit=target_rep,
        ))
    return tuple(result)


def _pair_orbit_representatives(representatives, orbits, stabilizers, action, order):
    """Pairs (i', j) with j the representative, one per G_j-orbit on O_i"""
    result = {}
    for i in representatives:
        for j in representatives:
            if i == j:
                continue
            G_j = stabilizers[j]
            covered: Set[str] = set()
            pairs = []
            for v in orbits[i]:
                if v in covered:
                    continue
                pairs.append((v, j))
                covered.update(action.act_vertex(h, v) for h in G_j.elements())
            result[(i, j)] = tuple(pairs)
    return result
