"""
McKay Service Module

Primitive idempotents of kQ*G, the generalized McKay quiver Q-hat, the
induced dual action of G on Q-hat and the double McKay check.
"""

import logging
from typing import Dict, List, Optional, Tuple

from networkx.algorithms.isomorphism import MultiDiGraphMatcher, categorical_node_match
from sympy.polys.domains import QQ

from app.core.exceptions import ConstructionMismatchError
from app.models.cyclotomic import CycScalar
from app.models.group import Character, GroupElement, Subgroup
from app.models.mckay import ArrowProvenance, McKayQuiver, McKayVertex, QuiverIsomorphism
from app.models.quiver import Arrow, GeneratorAction, MonomialAction, OrbitData, Path, Quiver
from app.models.skew import SkewElement
from app.services.abelian_group import character_of, characters_of_subgroup, pairing, restrict_character
from app.services.quiver_action import compute_orbits, validate_action


logger = logging.getLogger(__name__)


def vertex_label(base: str, stabilizer: Subgroup, character: Character) -> str:
    if stabilizer.order == 1:
        return base
    return f"{base}:{character.label}"


def arrow_label(representative: str, rho: Character, sigma: Character) -> str:
    if not rho.label and not sigma.label:
        return representative
    return f"{representative}[{rho.label}|{sigma.label}]"


class McKayService:
    """
    Generalized McKay construction for an admissible monomial action

    Arrows of Q-hat are found twice: by matching restricted characters on
    G_i ∩ G_j against the scalar character of the representative arrow,
    and by testing e_(j,sigma) * beta kappa * e_(i,rho) != 0 in kQ*G.
    """

    def __init__(self, quiver: Quiver, action: MonomialAction, orbit_data: Optional[OrbitData] = None):
        self.quiver = quiver
        self.action = action
        self.orbit_data = orbit_data or compute_orbits(quiver, action)
        self._idempotents: Dict[str, List[Tuple[Character, SkewElement]]] = {}

    @property
    def level(self) -> int:
        return self.action.level

    def idempotents(self, vertex: str) -> List[Tuple[Character, SkewElement]]:
        """
        e_(i,rho) = (1/|G_i|) sum_{h in G_i} rho(h) e_i h for every character rho of G_i

        Args:
            vertex: Any vertex i of Q

        Returns:
            (rho, idempotent) pairs in character order
        """
        if vertex in self._idempotents:
            return self._idempotents[vertex]
        stabilizer = self.orbit_data.stabilizer(vertex)
        weight = QQ(1, stabilizer.order)
        result = []
        for rho in characters_of_subgroup(stabilizer):
            terms = {}
            for h in stabilizer.elements():
                scalar = CycScalar.root_of_unity(self.level, stabilizer.evaluate(rho, h, self.level)) * weight
                terms[(Path.trivial(vertex), h.exponents)] = scalar
            result.append((rho, SkewElement(self.action, terms)))
        self._idempotents[vertex] = result
        return result

    def verify_idempotents(self, vertex: str) -> List[str]:
        """Failures of idempotency, orthogonality or completeness at a vertex"""
        failures = []
        family = self.idempotents(vertex)
        total = SkewElement.zero(self.action)
        for rho, e in family:
            total = total + e
            if e * e != e:
                failures.append(f"e_({vertex},{rho.label}) is not idempotent")
            for sigma, f in family:
                if sigma != rho and not (e * f).is_zero:
                    failures.append(f"e_({vertex},{rho.label}) e_({vertex},{sigma.label}) != 0")
        if total != SkewElement.vertex(self.action, vertex):
            failures.append(f"idempotents at {vertex} do not sum to e_{vertex}")
        return failures

    def build_mckay(self) -> McKayQuiver:
        """
        Construct Q-hat

        Returns:
            McKayQuiver with arrow provenance and normalized basis elements

        Raises:
            ConstructionMismatchError: If the counting and sandwich methods
                disagree or the arrow-count law fails
        """
        od = self.orbit_data
        group = self.action.group
        L = self.level

        vertices: Dict[str, McKayVertex] = {}
        for rep in od.representatives:
            G_i = od.stabilizer(rep)
            for chi in characters_of_subgroup(G_i):
                name = vertex_label(rep, G_i, chi)
                vertices[name] = McKayVertex(name=name, base=rep, character=chi)

        arrows: List[Arrow] = []
        provenance: Dict[str, ArrowProvenance] = {}
        basis: Dict[str, SkewElement] = {}

        for orbit in od.arrow_orbits:
            beta = self.quiver.arrow(orbit.representative)
            i, j = orbit.source_orbit, orbit.target_orbit
            G_i, G_j = od.stabilizer(i), od.stabilizer(j)
            G_ij = G_i.intersection(G_j)
            kappa = od.transporters[beta.source]

            counted = self._matched_by_characters(beta.id, G_i, G_j, G_ij)
            sandwiches = self._matched_by_sandwich(beta.id, kappa, i, j)
            if set(counted) != set(sandwiches):
                logger.error(
                    f"McKay methods disagree: orbit={beta.id}, counting={len(counted)}, "
                    f"sandwich={len(sandwiches)}"
                )
                raise ConstructionMismatchError(
                    f"Character matching and idempotent sandwiches disagree on arrow orbit {beta.id}"
                )

            expected = G_i.order * G_j.order // G_ij.order
            if len(counted) != expected:
                logger.error(f"Arrow count law failed: orbit={beta.id}, count={len(counted)}, expected={expected}")
                raise ConstructionMismatchError(
                    f"Arrow orbit {beta.id} gives {len(counted)} arrows, expected {expected}"
                )

            normalizer = QQ(expected)
            for rho, sigma in counted:
                arrow_id = arrow_label(beta.id, rho, sigma)
                source = vertex_label(i, G_i, rho)
                target = vertex_label(j, G_j, sigma)
                element = sandwiches[(rho, sigma)].scale(normalizer)
                if element.coefficient(Path(beta.source, beta.target, (beta.id,)), kappa) != CycScalar.one(L):
                    raise ConstructionMismatchError(f"Basis element for {arrow_id} is not normalized")
                arrows.append(Arrow(arrow_id, source, target))
                provenance[arrow_id] = ArrowProvenance(
                    orbit_representative=beta.id, transporter=kappa, rho=rho, sigma=sigma,
                )
                basis[arrow_id] = element
            logger.debug(f"Arrow orbit {beta.id}: {i}->{j}, arrows={len(counted)}")

        expected_vertices = sum(od.stabilizer(r).order for r in od.representatives)
        if len(vertices) != expected_vertices:
            raise ConstructionMismatchError(f"Q-hat has {len(vertices)} vertices, expected {expected_vertices}")

        mckay = McKayQuiver(
            quiver=Quiver(list(vertices), arrows),
            vertices=vertices,
            provenance=provenance,
            basis=basis,
            source_quiver=self.quiver,
            source_action=self.action,
            orbit_data=od,
        )
        logger.info(
            f"McKay quiver built: vertices={len(vertices)}, arrows={len(arrows)}, "
            f"level={L}, group_order={group.order}"
        )
        return mckay

    def _arrow_character(self, arrow_id: str, G_ij: Subgroup) -> Character:
        """Character r of G_i ∩ G_j with t(beta) = r(t) beta"""
        exponents = []
        for b, d in zip(G_ij.basis, G_ij.invariants):
            image, k = self.action.act(b, arrow_id)
            if image != arrow_id:
                raise ConstructionMismatchError(f"{b} fixes the endpoints of {arrow_id} but moves it")
            exponents.append(k * d // self.level)
        return G_ij.abstract.character(exponents)

    def _matched_by_characters(self, arrow_id, G_i, G_j, G_ij) -> List[Tuple[Character, Character]]:
        r = self._arrow_character(arrow_id, G_ij)
        matched = []
        for rho in characters_of_subgroup(G_i):
            rho_restricted = restrict_character(rho, G_ij, parent=G_i)
            for sigma in characters_of_subgroup(G_j):
                if rho_restricted == restrict_character(sigma, G_ij, parent=G_j) * r:
                    matched.append((rho, sigma))
        return matched

    def _matched_by_sandwich(self, arrow_id, kappa, i, j) -> Dict[Tuple[Character, Character], SkewElement]:
        beta = self.quiver.arrow(arrow_id)
        middle = SkewElement.monomial(self.action, Path(beta.source, beta.target, (beta.id,)), kappa)
        result = {}
        for sigma, e_sigma in self.idempotents(j):
            left = e_sigma * middle
            for rho, e_rho in self.idempotents(i):
                product = left * e_rho
                if not product.is_zero:
                    result[(rho, sigma)] = product
        return result

    def induced_action(self, mckay: McKayQuiver) -> MonomialAction:
        """
        Dual action of G on Q-hat

        g sends (i, rho) to (i, rho * chi_g|G_i) and a basis arrow b to
        chi_g(kappa) b', computed in kQ*G and checked there.

        Raises:
            ConstructionMismatchError: If provenance is missing or g(b) is not
                a multiple of a basis arrow
        """
        group = self.action.group
        L = self.level
        od = self.orbit_data
        generators = []
        for g in group.generators():
            chi_g = character_of(g)
            vertex_perm = {}
            for name, v in mckay.vertices.items():
                G_i = od.stabilizer(v.base)
                moved = v.character * restrict_character(chi_g, G_i)
                vertex_perm[name] = vertex_label(v.base, G_i, moved)

            arrow_map = {}
            for arrow in mckay.quiver.arrows:
                origin = mckay.provenance.get(arrow.id)
                if origin is None or arrow.id not in mckay.basis:
                    raise ConstructionMismatchError(f"Arrow {arrow.id} has no provenance")
                beta = self.quiver.arrow(origin.orbit_representative)
                i, j = od.orbit_of[beta.source], beta.target
                restrict_i = restrict_character(chi_g, od.stabilizer(i))
                restrict_j = restrict_character(chi_g, od.stabilizer(j))
                image_id = arrow_label(beta.id, origin.rho * restrict_i, origin.sigma * restrict_j)
                k = pairing(g, origin.transporter, L)

                expected = mckay.basis[image_id].scale(CycScalar.root_of_unity(L, k))
                if mckay.basis[arrow.id].dual_action(g) != expected:
                    logger.error(f"Induced action inconsistent: generator={g}, arrow={arrow.id}")
                    raise ConstructionMismatchError(f"{g} does not map basis arrow {arrow.id} to a basis multiple")
                arrow_map[arrow.id] = (image_id, k)
            generators.append(GeneratorAction(vertex_perm=vertex_perm, arrow_map=arrow_map))

        induced = MonomialAction(mckay.quiver, group, generators, level=L)
        mckay.induced = induced
        logger.info(f"Induced action computed: generators={group.rank}, level={L}")
        return induced

    def double_mckay_check(self) -> QuiverIsomorphism:
        """
        Build Q-hat-hat from (Q-hat, induced action) and search an isomorphism to Q
        """
        mckay = self.build_mckay()
        induced = self.induced_action(mckay)
        report = validate_action(mckay.quiver, induced)
        if not report.ok:
            raise ConstructionMismatchError("Induced action on Q-hat is not valid and admissible")
        second_service = McKayService(mckay.quiver, induced)
        second = second_service.build_mckay()
        second_induced = second_service.induced_action(second)

        result = find_quiver_isomorphism(second.quiver, second_induced, self.quiver, self.action)
        logger.info(
            f"Double McKay check: found={result.found}, relaxed={result.relaxed}, "
            f"vertices={len(second.quiver.vertices)}"
        )
        return result


def _signature_graph(quiver: Quiver, action: Optional[MonomialAction], with_orbits: bool):
    graph = quiver.to_networkx()
    sizes = {}
    if with_orbits and action is not None:
        for v in quiver.vertices:
            sizes[v] = len({action.act_vertex(g, v) for g in action.group.elements()})
    for v in quiver.vertices:
        graph.nodes[v]["signature"] = (
            len(quiver.incoming(v)),
            len(quiver.outgoing(v)),
            sizes.get(v, 0),
        )
    return graph


def find_quiver_isomorphism(
    left: Quiver,
    left_action: Optional[MonomialAction],
    right: Quiver,
    right_action: Optional[MonomialAction],
) -> QuiverIsomorphism:
    """
    Backtracking (VF2) isomorphism search with vertices blocked by
    (in-degree, out-degree, orbit size); retried on degrees alone
    """
    profile = {
        "left": sorted(_signature_graph(left, left_action, True).nodes[v]["signature"] for v in left.vertices),
        "right": sorted(_signature_graph(right, right_action, True).nodes[v]["signature"] for v in right.vertices),
    }
    position = {v: k for k, v in enumerate(right.vertices)}
    for relaxed in (False, True):
        g1 = _signature_graph(left, left_action, not relaxed)
        g2 = _signature_graph(right, right_action, not relaxed)
        matcher = MultiDiGraphMatcher(g1, g2, node_match=categorical_node_match("signature", None))
        # VF2 visits nodes in hash order; the smallest match in right-hand vertex order is stable
        vertex_map = min(
            matcher.isomorphisms_iter(),
            key=lambda m: tuple(position[m[v]] for v in left.vertices),
            default=None,
        )
        if vertex_map is not None:
            vertex_map = {v: vertex_map[v] for v in left.vertices}
            arrow_map = {}
            for u in left.vertices:
                for v in left.vertices:
                    ours = left.arrows_between(u, v)
                    theirs = right.arrows_between(vertex_map[u], vertex_map[v])
                    for a, b in zip(ours, theirs):
                        arrow_map[a.id] = b.id
            return QuiverIsomorphism(True, vertex_map, arrow_map, profile, relaxed)
    return QuiverIsomorphism(False, profile=profile)


def build_mckay(quiver: Quiver, action: MonomialAction) -> McKayQuiver:
    return McKayService(quiver, action).build_mckay()


def induced_action(mckay: McKayQuiver) -> MonomialAction:
    return McKayService(mckay.source_quiver, mckay.source_action, mckay.orbit_data).induced_action(mckay)


def double_mckay_check(quiver: Quiver, action: MonomialAction) -> QuiverIsomorphism:
    return McKayService(quiver, action).double_mckay_check()
