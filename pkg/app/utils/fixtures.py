"""
Built-in input documents

The worked examples, the two rows of the Z/2 folding table, small affine
cases and a generator of random admissible actions built from induced
G-sets.
"""

import random
from typing import Dict, List, Optional, Sequence, Tuple

from app.models.group import AbelianGroup, Subgroup
from app.models.quiver import Arrow, GeneratorAction, MonomialAction, Quiver
from app.schemas.document import InputDocument, parse_document


def _document(
    name: str,
    vertices: Sequence[str],
    arrows: Sequence[Tuple[str, str, str]],
    orders: Sequence[int],
    generators: Sequence[Tuple[Dict[str, str], Dict[str, Tuple[str, int, int]]]],
) -> InputDocument:
    return parse_document({
        "name": name,
        "quiver": {
            "vertices": list(vertices),
            "arrows": [{"id": a, "src": s, "tgt": t} for a, s, t in arrows],
        },
        "group": {"orders": list(orders)},
        "action": {
            "generators": [
                {
                    "vertex_perm": perm,
                    "arrows": {
                        a: {"to": b, "scalar_num": num, "scalar_den": den}
                        for a, (b, num, den) in images.items()
                    },
                }
                for perm, images in generators
            ]
        },
    })


def star_with_z6() -> InputDocument:
    """D4 star with Z/6 rotating the leaves, each arrow picking up a sign"""
    return _document(
        "ex51",
        ["1", "2", "3", "4"],
        [("alpha", "1", "2"), ("beta", "1", "3"), ("gamma", "1", "4")],
        [6],
        [(
            {"1": "1", "2": "3", "3": "4", "4": "2"},
            {"alpha": ("beta", 1, 2), "beta": ("gamma", 1, 2), "gamma": ("alpha", 1, 2)},
        )],
    )


def two_a5_copies() -> InputDocument:
    """Two copies of A5 with Z/2 x Z/2 reflecting each copy and swapping them"""
    vertices = ["1", "2", "3", "4", "5", "1'", "2'", "3'", "4'", "5'"]
    arrows = []
    for suffix in ("", "'"):
        arrows += [
            (f"a1{suffix}", f"2{suffix}", f"1{suffix}"),
            (f"a2{suffix}", f"3{suffix}", f"2{suffix}"),
            (f"a3{suffix}", f"3{suffix}", f"4{suffix}"),
            (f"a4{suffix}", f"4{suffix}", f"5{suffix}"),
        ]
    mirror = {"1": "5", "2": "4", "3": "3", "4": "2", "5": "1"}
    mirror_arrows = {"a1": "a4", "a2": "a3", "a3": "a2", "a4": "a1"}
    a_perm, a_arrows, b_perm, b_arrows = {}, {}, {}, {}
    for suffix, other in (("", "'"), ("'", "")):
        for v, w in mirror.items():
            a_perm[v + suffix] = w + suffix
            b_perm[v + suffix] = v + other
        for x, y in mirror_arrows.items():
            a_arrows[x + suffix] = (y + suffix, 0, 1)
            b_arrows[x + suffix] = (x + other, 0, 1)
    return _document("ex52", vertices, arrows, [2, 2], [(a_perm, a_arrows), (b_perm, b_arrows)])


def a_row(n: int) -> InputDocument:
    """A_(2n+1) as two arms 1..n and 1'..n' into the middle vertex n+1, Z/2 swapping the arms"""
    if n < 1:
        raise ValueError("a_row needs n >= 1")
    middle = str(n + 1)
    arms = [[str(k) for k in range(1, n + 1)], [f"{k}'" for k in range(1, n + 1)]]
    vertices = arms[0] + arms[1] + [middle]
    arrows = []
    for arm, tag in zip(arms, ("", "'")):
        chain = arm + [middle]
        arrows += [(f"a{k + 1}{tag}", chain[k], chain[k + 1]) for k in range(n)]
    perm = {middle: middle}
    images = {}
    for k in range(n):
        perm[arms[0][k]] = arms[1][k]
        perm[arms[1][k]] = arms[0][k]
        images[f"a{k + 1}"] = (f"a{k + 1}'", 0, 1)
        images[f"a{k + 1}'"] = (f"a{k + 1}", 0, 1)
    return _document(f"a-row-{n}", vertices, arrows, [2], [(perm, images)])


def d_row(n: int) -> InputDocument:
    """D_(n+2) as a chain 1..n forking into n+1 and (n+1)', Z/2 swapping the fork"""
    if n < 1:
        raise ValueError("d_row needs n >= 1")
    chain = [str(k) for k in range(1, n + 1)]
    fork = [str(n + 1), f"{n + 1}'"]
    vertices = chain + fork
    arrows = [(f"a{k + 1}", chain[k], chain[k + 1]) for k in range(n - 1)]
    arrows += [("b", chain[-1], fork[0]), ("b'", chain[-1], fork[1])]
    perm = {v: v for v in chain}
    perm[fork[0]], perm[fork[1]] = fork[1], fork[0]
    images = {a: (a, 0, 1) for a, _, _ in arrows[:-2]}
    images["b"], images["b'"] = ("b'", 0, 1), ("b", 0, 1)
    return _document(f"d-row-{n}", vertices, arrows, [2], [(perm, images)])


def a3_flip() -> InputDocument:
    return a_row(1)


def trivial_action(document: InputDocument) -> InputDocument:
    """The same quiver with the trivial group acting"""
    quiver = document.to_quiver()
    return _document(
        f"{document.name}-trivial",
        quiver.vertices,
        [(a.id, a.source, a.target) for a in quiver.arrows],
        [1],
        [({v: v for v in quiver.vertices}, {a: (a, 0, 1) for a in quiver.arrow_ids})],
    )


def cycle4() -> InputDocument:
    """Oriented 4-cycle with Z/2 rotating by two steps; folds to the affine rank 2 matrix"""
    vertices = ["0", "1", "2", "3"]
    arrows = [(f"c{k}", str(k), str((k + 1) % 4)) for k in range(4)]
    perm = {str(k): str((k + 2) % 4) for k in range(4)}
    images = {f"c{k}": (f"c{(k + 2) % 4}", 0, 1) for k in range(4)}
    return _document("cycle4", vertices, arrows, [2], [(perm, images)])


def kronecker() -> InputDocument:
    """Kronecker quiver with Z/2 negating one of the two arrows"""
    return _document(
        "kronecker",
        ["1", "2"],
        [("a", "1", "2"), ("b", "1", "2")],
        [2],
        [({"1": "1", "2": "2"}, {"a": ("a", 0, 1), "b": ("b", 1, 2)})],
    )


BUILT_IN = {
    "ex51": star_with_z6,
    "ex52": two_a5_copies,
    "a3-flip": a3_flip,
    "cycle4": cycle4,
    "kronecker": kronecker,
}


def _random_group(rng: random.Random, max_group_order: int) -> AbelianGroup:
    first = rng.randint(1, max_group_order)
    if first > 1 and rng.random() < 0.4:
        second = rng.randint(1, max(1, max_group_order // first))
        if second > 1:
            return AbelianGroup((first, second))
    return AbelianGroup((first,))


def _random_subgroup(rng: random.Random, group: AbelianGroup) -> Subgroup:
    elements = group.elements()
    return Subgroup(group, rng.sample(elements, rng.randint(0, min(2, len(elements)))))


def random_admissible_action(
    seed: int,
    max_group_order: int = 12,
    max_vertices: int = 8,
    max_arrow_orbits: int = 4,
) -> Tuple[Quiver, MonomialAction]:
    """
    Random admissible monomial action built from induced G-sets

    Vertex orbits are coset spaces G/H. An arrow orbit from orbit i to
    orbit j is induced from a character of K = H_i ∩ H_j, so K scales its
    representative arrow and G permutes the translates.
    """
    rng = random.Random(seed)
    group = _random_group(rng, max_group_order)
    L = group.exponent
    elements = group.elements()

    orbits: List[Tuple[Subgroup, List[str], Dict[Tuple[int, ...], int]]] = []
    vertices: List[str] = []
    attempts = 0
    while True:
        attempts += 1
        subgroup = _random_subgroup(rng, group) if attempts < 20 else Subgroup(group, group.generators())
        size = subgroup.index
        if len(vertices) + size > max_vertices:
            if len(orbits) >= 2:
                break
            continue
        k = len(orbits)
        reps = subgroup.coset_representatives()
        names = [f"v{k}_{c}" for c in range(len(reps))]
        coset_of = {}
        for c, r in enumerate(reps):
            for h in subgroup.elements():
                coset_of[(r * h).exponents] = c
        orbits.append((subgroup, names, coset_of))
        vertices.extend(names)
        if len(vertices) == max_vertices or (len(orbits) >= 2 and rng.random() < 0.25):
            break

    arrows: List[Arrow] = []
    arrow_orbits = []
    if len(orbits) >= 2:
        for m in range(rng.randint(1, max_arrow_orbits)):
            i, j = rng.sample(range(len(orbits)), 2)
            H_i, names_i, cosets_i = orbits[i]
            H_j, names_j, cosets_j = orbits[j]
            K = H_i.intersection(H_j)
            chi = rng.choice(K.abstract.characters())
            shift = rng.choice(elements)
            reps = K.coset_representatives()
            index_of = {}
            ids = []
            for c, r in enumerate(reps):
                for h in K.elements():
                    index_of[(r * h).exponents] = c
                arrow_id = f"a{m}_{c}"
                ids.append(arrow_id)
                arrows.append(Arrow(arrow_id, names_i[cosets_i[r.exponents]], names_j[cosets_j[(r * shift).exponents]]))
            arrow_orbits.append((K, chi, reps, index_of, ids))

    quiver = Quiver(vertices, arrows)
    generators = []
    for s in group.generators():
        perm = {}
        for subgroup, names, coset_of in orbits:
            for r in subgroup.coset_representatives():
                perm[names[coset_of[r.exponents]]] = names[coset_of[(s * r).exponents]]
        arrow_map = {}
        for K, chi, reps, index_of, ids in arrow_orbits:
            for c, r in enumerate(reps):
                image = s * r
                target = index_of[image.exponents]
                k = reps[target].inverse() * image
                arrow_map[ids[c]] = (ids[target], K.evaluate(chi, k, L))
        generators.append(GeneratorAction(perm, arrow_map))
    return quiver, MonomialAction(quiver, group, generators, level=L)


def load_builtin(name: str, n: Optional[int] = None) -> InputDocument:
    """
    Raises:
        KeyError: If no built-in document has that name
    """
    if name == "a-row":
        return a_row(n or 1)
    if name == "d-row":
        return d_row(n or 1)
    return BUILT_IN[name]()
