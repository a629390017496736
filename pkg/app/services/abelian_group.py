"""
Abelian group operations

Smith normal form, characters of subgroups, the character pairing
g -> chi_g and restriction of characters to subgroups.
"""

import logging
from typing import List, Optional

from app.core.exceptions import GroupMismatchError, NotASubgroupError
from app.models.group import AbelianGroup, Character, GroupElement, Subgroup
from app.utils.linalg import smith_normal_form


logger = logging.getLogger(__name__)

__all__ = [
    "smith_normal_form",
    "characters_of_subgroup",
    "pairing",
    "character_of",
    "restrict_character",
]


def characters_of_subgroup(subgroup: Subgroup) -> List[Character]:
    """
    All characters of a subgroup

    Characters are characters of the subgroup's abstract group on its
    canonical basis, trivial first, in lexicographic exponent order.

    Args:
        subgroup: Subgroup H

    Returns:
        |H| pairwise distinct characters
    """
    characters = subgroup.abstract.characters()
    logger.debug(f"Characters of subgroup: order={subgroup.order}, invariants={subgroup.invariants}")
    return characters


def pairing(g: GroupElement, h: GroupElement, level: Optional[int] = None) -> int:
    """
    Exponent k with chi_g(h) = zeta_L^k

    Args:
        g: Element defining the character chi_g
        h: Element it is evaluated on
        level: Cyclotomic level (defaults to the group exponent)

    Raises:
        GroupMismatchError: If g and h belong to different groups
    """
    if g.group != h.group:
        logger.error(f"Pairing across groups: left={g.group}, right={h.group}")
        raise GroupMismatchError(f"Cannot pair elements of {g.group} and {h.group}")
    return character_of(g).value(h, level)


def character_of(g: GroupElement) -> Character:
    """The character chi_g"""
    return Character(g.group, g.exponents)


def restrict_character(
    character: Character,
    subgroup: Subgroup,
    parent: Optional[Subgroup] = None,
) -> Character:
    """
    Restrict a character to a subgroup

    Args:
        character: Character of the ambient group, or of parent's abstract
            group when parent is given
        subgroup: Target subgroup H
        parent: Subgroup the character lives on, for restricting again

    Returns:
        Character of H (on its canonical basis)

    Raises:
        NotASubgroupError: If H is not contained in the character's group
    """
    if parent is None:
        if character.group != subgroup.ambient:
            logger.error(f"Restriction to foreign subgroup: group={character.group}, ambient={subgroup.ambient}")
            raise NotASubgroupError(f"Subgroup of {subgroup.ambient} is not a subgroup of {character.group}")

        def evaluate(h: GroupElement, level: int) -> int:
            return character.value(h, level)
    else:
        if character.group != parent.abstract:
            raise GroupMismatchError("Character does not belong to the given parent subgroup")
        if not subgroup.is_subgroup_of(parent):
            logger.error(f"Restriction outside parent: subgroup={subgroup}, parent={parent}")
            raise NotASubgroupError(f"{subgroup} is not contained in {parent}")

        def evaluate(h: GroupElement, level: int) -> int:
            return parent.evaluate(character, h, level)

    # value on basis element b_k of order d_k is zeta_{d_k}^{s_k}
    level = character.group.exponent
    exponents = []
    for b, d in zip(subgroup.basis, subgroup.invariants):
        k = evaluate(b, level)
        exponents.append(k * d // level)
    return subgroup.abstract.character(exponents)
