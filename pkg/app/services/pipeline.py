"""
Folding pipeline

Runs the constructions once per input (orbits, Q-hat, induced action,
Cartan data, folding maps) and hands the bundle to the verification suites.
"""

import logging
from dataclasses import dataclass

from app.models.cartan import CartanMatrix, ValuedGraphData
from app.models.lattice import BilinearForm
from app.models.mckay import McKayQuiver
from app.models.quiver import MonomialAction, OrbitData, Quiver
from app.models.roots import FoldingMaps
from app.services.cartan_service import cartan_of_quiver, fold_cartan
from app.services.mckay_service import McKayService
from app.services.quiver_action import compute_orbits


logger = logging.getLogger(__name__)


@dataclass
class FoldingFixture:
    name: str
    quiver: Quiver
    action: MonomialAction
    orbit_data: OrbitData
    mckay: McKayQuiver
    mckay_orbits: OrbitData
    A: CartanMatrix
    A_hat: CartanMatrix
    folded: ValuedGraphData
    maps: FoldingMaps

    @property
    def group(self):
        return self.action.group

    @property
    def form_Q(self) -> BilinearForm:
        return BilinearForm(self.A.index, self.A.matrix)

    @property
    def form_Gamma(self) -> BilinearForm:
        return BilinearForm(self.folded.B.index, self.folded.B.matrix)

    @property
    def form_hat(self) -> BilinearForm:
        return BilinearForm(self.A_hat.index, self.A_hat.matrix)

    @property
    def C(self) -> CartanMatrix:
        return self.folded.C


def build_fixture(quiver: Quiver, action: MonomialAction, name: str = "") -> FoldingFixture:
    """
    Build every upstream construction for (Q, G)

    Raises:
        InvalidActionError: If the action is not valid and admissible
        ConstructionMismatchError: If the McKay construction is inconsistent
    """
    orbit_data = compute_orbits(quiver, action)
    service = McKayService(quiver, action, orbit_data)
    mckay = service.build_mckay()
    induced = service.induced_action(mckay)
    mckay_orbits = compute_orbits(mckay.quiver, induced)
    fixture = FoldingFixture(
        name=name,
        quiver=quiver,
        action=action,
        orbit_data=orbit_data,
        mckay=mckay,
        mckay_orbits=mckay_orbits,
        A=cartan_of_quiver(quiver),
        A_hat=cartan_of_quiver(mckay.quiver),
        folded=fold_cartan(quiver, orbit_data),
        maps=FoldingMaps(action, orbit_data, mckay),
    )
    logger.info(
        f"Fixture built: name={name or '-'}, vertices={len(quiver.vertices)}, "
        f"mckay_vertices={len(mckay.quiver.vertices)}, rank={len(orbit_data.representatives)}"
    )
    return fixture
