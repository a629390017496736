"""
Built-in document and random action tests
"""

import pytest

from app.services.cartan_service import classify, cartan_of_quiver
from app.services.mckay_service import double_mckay_check
from app.services.pipeline import build_fixture
from app.services.quiver_action import compute_orbits, validate_action
from app.utils import fixtures


@pytest.mark.documents
class TestBuiltIns:
    """Test the built-in documents"""

    @pytest.mark.parametrize("name", sorted(fixtures.BUILT_IN))
    def test_load_builtin(self, name):
        document = fixtures.load_builtin(name)
        quiver = document.to_quiver()
        assert validate_action(quiver, document.to_action(quiver)).ok

    def test_unknown_builtin(self):
        with pytest.raises(KeyError):
            fixtures.load_builtin("e9")

    @pytest.mark.parametrize("n, a_type, d_type", [(1, "A3", "A3"), (2, "A5", "D4"), (3, "A7", "D5")])
    def test_table_rows(self, n, a_type, d_type):
        """Test that the rows unfold A_(2n+1) and D_(n+2)"""
        assert str(classify(cartan_of_quiver(fixtures.a_row(n).to_quiver()))) == a_type
        assert str(classify(cartan_of_quiver(fixtures.d_row(n).to_quiver()))) == d_type
        assert fixtures.load_builtin("a-row", n).name == f"a-row-{n}"

    @pytest.mark.parametrize("make", [fixtures.a_row, fixtures.d_row])
    def test_rows_need_positive_n(self, make):
        with pytest.raises(ValueError):
            make(0)

    def test_trivial_action_keeps_quiver(self):
        document = fixtures.trivial_action(fixtures.two_a5_copies())
        assert document.group.orders == [1]
        assert document.quiver.vertices == fixtures.two_a5_copies().quiver.vertices


@pytest.mark.documents
class TestRandomActions:
    """Test random admissible actions built from induced G-sets"""

    @pytest.mark.parametrize("seed", range(40))
    def test_random_actions_are_admissible(self, seed):
        quiver, action = fixtures.random_admissible_action(seed)
        report = validate_action(quiver, action)
        assert report.ok, report.violations[:3]
        assert len(quiver.vertices) <= 8

    def test_same_seed_same_action(self):
        first, _ = fixtures.random_admissible_action(11)
        second, _ = fixtures.random_admissible_action(11)
        assert first.vertices == second.vertices
        assert [(a.id, a.source, a.target) for a in first.arrows] == [(a.id, a.source, a.target) for a in second.arrows]

    @pytest.mark.parametrize("seed", range(10))
    def test_orbits_are_coset_spaces(self, seed):
        """Test that each orbit has size [G : G_i]"""
        quiver, action = fixtures.random_admissible_action(seed, max_group_order=6)
        od = compute_orbits(quiver, action)
        for r in od.representatives:
            assert od.orbit_size(r) * od.stabilizer(r).order == action.group.order


@pytest.mark.documents
@pytest.mark.slow
class TestRandomMcKay:
    """Test the McKay construction on random admissible actions"""

    @pytest.mark.parametrize("seed", range(100))
    def test_random_action(self, seed):
        quiver, action = fixtures.random_admissible_action(seed)
        fixture = build_fixture(quiver, action, f"random-{seed}")
        od = fixture.orbit_data

        for v in quiver.vertices:
            assert action.act_vertex(od.transporters[v], od.orbit_of[v]) == v

        for orbit in od.arrow_orbits:
            G_i = od.stabilizer(orbit.source_orbit)
            G_j = od.stabilizer(orbit.target_orbit)
            expected = G_i.order * G_j.order // G_i.intersection(G_j).order
            made = [a for a, p in fixture.mckay.provenance.items() if p.orbit_representative == orbit.representative]
            assert len(made) == expected
        assert len(fixture.mckay.quiver.vertices) == sum(od.stabilizer(r).order for r in od.representatives)

        induced = validate_action(fixture.mckay.quiver, fixture.mckay.induced)
        assert induced.ok, induced.violations[:3]

        assert double_mckay_check(quiver, action).found
