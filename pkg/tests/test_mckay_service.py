"""
McKay quiver construction tests
"""

import pytest
from sympy.polys.domains import QQ

from app.core.exceptions import GroupMismatchError
from app.models.cyclotomic import CycScalar
from app.models.quiver import Arrow, Path, Quiver
from app.services.mckay_service import (
    McKayService,
    double_mckay_check,
    find_quiver_isomorphism,
)
from app.services.cartan_service import classify
from app.services.quiver_action import validate_action
from app.utils import fixtures


@pytest.mark.mckay
class TestCyclotomicScalars:
    """Test exact arithmetic in Q(zeta_L)"""

    def test_roots_of_unity(self):
        z = CycScalar.root_of_unity(6, 1)
        assert z ** 6 == CycScalar.one(6)
        assert z ** 3 == -1
        assert z * z.inverse() == 1

    def test_coordinates_are_rational(self):
        z = CycScalar.root_of_unity(6, 1)
        assert z.to_vector() == [QQ(0), QQ(1)]
        assert all(isinstance(x, QQ.dtype) for x in z.to_vector())
        half = CycScalar.one(4) / 2
        assert half.to_rational() == QQ(1, 2)
        assert CycScalar.rational(4, QQ(1, 2)) == half

    def test_multiplication_matrix(self):
        """Test that multiplication by i on Q(i) is a quarter turn"""
        assert CycScalar.root_of_unity(4, 1).multiplication_matrix() == [[0, -1], [1, 0]]

    def test_levels_must_agree(self):
        with pytest.raises(GroupMismatchError):
            CycScalar.one(4) + CycScalar.one(6)


@pytest.mark.mckay
class TestIdempotents:
    """Test the primitive idempotents of the skew group algebra"""

    def test_idempotent_count(self, ex51):
        """Test that there is one idempotent per character of the stabilizer"""
        service = McKayService(ex51.quiver, ex51.action, ex51.orbit_data)
        assert len(service.idempotents("1")) == 6
        assert len(service.idempotents("2")) == 2
        assert len(service.idempotents("3")) == 2

    @pytest.mark.parametrize("vertex", ["1", "2", "4"])
    def test_idempotents_complete_and_orthogonal(self, ex51, vertex):
        """Test that the idempotents at a vertex are orthogonal and sum to e_i"""
        service = McKayService(ex51.quiver, ex51.action, ex51.orbit_data)
        assert service.verify_idempotents(vertex) == []


@pytest.mark.mckay
class TestMcKayQuiver:
    """Test the generalized McKay quiver of the built-in documents"""

    def test_star_with_z6(self, ex51):
        """Test that the D4 star with Z/6 gives 8 vertices, 6 arrows, D4 + D4"""
        mckay = ex51.mckay
        assert len(mckay.quiver.vertices) == 8
        assert len(mckay.quiver.arrows) == 6
        assert str(classify(ex51.A_hat)) == "D4 + D4"

    def test_star_vertex_names(self, ex51):
        """Test that Q-hat vertices are (representative, character) pairs"""
        assert ex51.mckay.fiber("1") == [f"1:{l}" for l in range(6)]
        assert ex51.mckay.fiber("2") == ["2:0", "2:1"]

    def test_star_arrows_pair_characters_of_equal_parity(self, ex51):
        """Test that 1:l -> 2:j exists exactly when l and j differ by the arrow sign"""
        mckay = ex51.mckay
        for arrow in mckay.quiver.arrows:
            rho = mckay.vertices[arrow.source].character.exponents[0]
            sigma = mckay.vertices[arrow.target].character.exponents[0]
            assert mckay.base_of(arrow.source) == "1"
            assert (rho + sigma) % 2 == 1

    def test_arrow_count_law(self, ex51, ex52):
        """Test that each arrow orbit gives |G_i||G_j|/|G_ij| arrows"""
        for fixture in (ex51, ex52):
            od = fixture.orbit_data
            for orbit in od.arrow_orbits:
                G_i = od.stabilizer(orbit.source_orbit)
                G_j = od.stabilizer(orbit.target_orbit)
                expected = G_i.order * G_j.order // G_i.intersection(G_j).order
                made = [a for a, p in fixture.mckay.provenance.items() if p.orbit_representative == orbit.representative]
                assert len(made) == expected

    def test_two_copies_of_a5(self, ex52):
        """Test that two A5 copies under Z/2 x Z/2 give Q-hat of type D4"""
        assert len(ex52.mckay.quiver.vertices) == 4
        assert str(classify(ex52.A_hat)) == "D4"

    def test_trivial_group_returns_quiver(self, trivial_a3):
        """Test that the trivial group gives Q-hat equal to Q"""
        quiver, mckay = trivial_a3.quiver, trivial_a3.mckay.quiver
        assert set(mckay.vertices) == set(quiver.vertices)
        assert {(a.id, a.source, a.target) for a in mckay.arrows} == {
            (a.id, a.source, a.target) for a in quiver.arrows
        }

    def test_kronecker_sign_gives_affine_square(self, kronecker):
        """Test that negating one Kronecker arrow gives a four-cycle"""
        mckay = kronecker.mckay.quiver
        assert len(mckay.vertices) == 4
        assert len(mckay.arrows) == 4
        assert classify(kronecker.A_hat).kind == "affine"

    def test_basis_elements_normalized(self, ex51):
        """Test that every basis arrow has coefficient 1 on beta kappa"""
        one = CycScalar.one(ex51.mckay.level)
        for arrow_id, origin in ex51.mckay.provenance.items():
            beta = ex51.quiver.arrow(origin.orbit_representative)
            path = Path(beta.source, beta.target, (beta.id,))
            assert ex51.mckay.basis[arrow_id].coefficient(path, origin.transporter) == one


@pytest.mark.mckay
class TestInducedAction:
    """Test the dual action on Q-hat"""

    def test_induced_action_valid(self, ex51, ex52, kronecker):
        """Test that the induced action is valid and admissible"""
        for fixture in (ex51, ex52, kronecker):
            report = validate_action(fixture.mckay.quiver, fixture.mckay.induced)
            assert report.ok

    def test_generator_shifts_characters(self, ex51):
        """Test that the generator multiplies characters by its restriction"""
        induced = ex51.mckay.induced
        g = induced.group.generators()[0]
        assert induced.act_vertex(g, "1:0") == "1:1"
        assert induced.act_vertex(g, "1:5") == "1:0"
        assert induced.act_vertex(g, "2:0") == "2:1"

    def test_induced_orbits(self, ex51):
        """Test that the induced action has one orbit per representative"""
        assert len(ex51.mckay_orbits.representatives) == 2
        sizes = sorted(len(o) for o in ex51.mckay_orbits.orbits.values())
        assert sizes == [2, 6]


@pytest.mark.mckay
class TestDoubleMcKay:
    """Test that building Q-hat twice returns Q"""

    @pytest.mark.parametrize("factory", [fixtures.a3_flip, fixtures.kronecker, fixtures.cycle4])
    def test_double_mckay_small(self, factory):
        document = factory()
        quiver = document.to_quiver()
        result = double_mckay_check(quiver, document.to_action(quiver))
        assert result.found
        assert set(result.vertex_map.values()) == set(quiver.vertices)

    def test_double_mckay_star(self, ex51):
        """Test that Q-hat-hat of the D4 star is the D4 star"""
        service = McKayService(ex51.quiver, ex51.action, ex51.orbit_data)
        result = service.double_mckay_check()
        assert result.found
        assert len(result.arrow_map) == 3

    def test_isomorphism_search_fails_on_different_quivers(self):
        """Test that quivers with different vertex counts are not matched"""
        left = Quiver(["1", "2"], [Arrow("a", "1", "2")])
        right = Quiver(["1", "2", "3"], [Arrow("a", "1", "2"), Arrow("b", "2", "3")])
        result = find_quiver_isomorphism(left, None, right, None)
        assert not result.found
        assert result.profile["left"] != result.profile["right"]

    def test_isomorphism_choice_is_canonical(self, cycle4):
        """Test that among the four rotations the match smallest in right-hand vertex order is returned"""
        right = Quiver(["a", "b", "c", "d"], [Arrow("x", "c", "d"), Arrow("y", "d", "a"), Arrow("z", "a", "b"), Arrow("w", "b", "c")])
        result = find_quiver_isomorphism(cycle4.quiver, None, right, None)
        assert result.found
        assert result.vertex_map == {"0": "a", "1": "b", "2": "c", "3": "d"}
        assert result.arrow_map == {"c0": "z", "c1": "w", "c2": "x", "c3": "y"}

    def test_self_isomorphism_is_identity(self, cycle4):
        result = find_quiver_isomorphism(cycle4.quiver, cycle4.action, cycle4.quiver, cycle4.action)
        assert result.vertex_map == {v: v for v in cycle4.quiver.vertices}
