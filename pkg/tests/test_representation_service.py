"""
Quiver representation tests
"""

import pytest

from app.core.exceptions import NotFiniteTypeError, RepresentationError
from app.models.cyclotomic import CycScalar
from app.models.group import Subgroup
from app.models.lattice import LatticeVector
from app.models.quiver import Arrow, Quiver
from app.models.representation import Representation
from app.services.representation_service import (
    coset_representatives,
    direct_sum,
    endomorphism_dimension,
    hom_space,
    indecomposables_dynkin,
    is_invertible,
    is_isomorphic,
    reflection_functor_minus,
    reflection_functor_plus,
    sigma_module,
    simple,
    thin,
    twist,
    twist_orbit,
    twist_stabilizer,
    verify_fiber_modules,
    verify_invariant_modules,
)


def _kronecker_module(kronecker, a, b):
    """dims (1, 1) with scalar matrices on the two arrows"""
    return Representation(kronecker.quiver, kronecker.action.level, {"1": 1, "2": 1}, {"a": [[a]], "b": [[b]]})


@pytest.mark.representations
class TestRepresentation:
    """Test representation bookkeeping"""

    def test_unknown_vertex(self, kronecker):
        with pytest.raises(RepresentationError):
            Representation(kronecker.quiver, 2, {"9": 1})

    def test_negative_dimension(self, kronecker):
        with pytest.raises(RepresentationError):
            Representation(kronecker.quiver, 2, {"1": -1})

    def test_bad_shape(self, kronecker):
        """Test that a matrix must be d_target by d_source"""
        with pytest.raises(RepresentationError):
            Representation(kronecker.quiver, 2, {"1": 1, "2": 2}, {"a": [[1, 0]]})

    def test_unknown_arrow(self, kronecker):
        with pytest.raises(RepresentationError):
            Representation(kronecker.quiver, 2, {"1": 1, "2": 1}, {"c": [[1]]})

    def test_missing_maps_are_zero(self, kronecker):
        M = Representation(kronecker.quiver, 2, {"1": 1, "2": 1})
        assert M.matrix("a") == ((CycScalar.zero(2),),)
        assert M.total_dimension == 2
        assert not M.is_zero

    def test_thin_and_simple(self, a3_flip):
        quiver = a3_flip.quiver
        M = thin(quiver, ["1", "2"])
        assert M.dimension_vector() == LatticeVector.from_mapping(quiver.vertices, {"1": 1, "2": 1})
        assert simple(quiver, "2").total_dimension == 1

    def test_direct_sum(self, kronecker):
        M = direct_sum([_kronecker_module(kronecker, 1, 0), _kronecker_module(kronecker, 0, 1)])
        assert M.dims == {"1": 2, "2": 2}
        one, zero = CycScalar.one(2), CycScalar.zero(2)
        assert M.matrix("a") == ((one, zero), (zero, zero))
        assert M.matrix("b") == ((zero, zero), (zero, one))

    def test_direct_sum_needs_summands(self):
        with pytest.raises(RepresentationError):
            direct_sum([])

    def test_to_dict(self, kronecker):
        data = _kronecker_module(kronecker, 1, -1).to_dict()
        assert data["dims"] == {"1": 1, "2": 1}
        assert set(data["maps"]) == {"a", "b"}


@pytest.mark.representations
class TestHomAndIsomorphism:
    """Test intertwiners and the isomorphism decision"""

    def test_hom_between_different_lines(self, kronecker):
        """Test that lines of different slope have no maps between them"""
        M, N = _kronecker_module(kronecker, 1, 1), _kronecker_module(kronecker, 1, -1)
        assert hom_space(M, N) == []
        result = is_isomorphic(M, N)
        assert not result.isomorphic
        assert result.certified
        assert result.method == "hom space is zero"

    def test_endomorphisms(self, kronecker):
        M = _kronecker_module(kronecker, 1, 1)
        N = _kronecker_module(kronecker, 1, -1)
        assert endomorphism_dimension(M) == 1
        assert endomorphism_dimension(direct_sum([M, M])) == 4
        assert endomorphism_dimension(direct_sum([M, N])) == 2

    def test_rescaled_copy_is_isomorphic(self, kronecker):
        M = _kronecker_module(kronecker, 1, 1)
        N = _kronecker_module(kronecker, 2, 2)
        result = is_isomorphic(M, N, seed=5)
        assert result.isomorphic
        assert result.certified
        assert is_invertible(result.witness)
        assert result.hom_dimension == 1

    def test_different_dimension_vectors(self, kronecker):
        result = is_isomorphic(simple(kronecker.quiver, "1", 2), simple(kronecker.quiver, "2", 2))
        assert not result.isomorphic
        assert result.certified

    def test_zero_representations(self, kronecker):
        zero = Representation(kronecker.quiver, 2, {})
        assert is_isomorphic(zero, zero).isomorphic

    def test_vanishing_determinant_certifies(self, kronecker):
        """Test that a nonzero hom space without invertible elements is a certified negative"""
        M = _kronecker_module(kronecker, 1, 0)
        N = direct_sum([simple(kronecker.quiver, "1", 2), simple(kronecker.quiver, "2", 2)])
        result = is_isomorphic(M, N)
        assert not result.isomorphic
        assert result.certified
        assert result.hom_dimension == 1
        assert result.method == "determinant polynomial vanishes"

    def test_mixed_levels(self, kronecker):
        with pytest.raises(RepresentationError):
            hom_space(simple(kronecker.quiver, "1", 2), simple(kronecker.quiver, "1", 4))


@pytest.mark.representations
class TestTwists:
    """Test twisting by group elements and orbit sums"""

    def test_sign_twist(self, kronecker):
        """Test that negating b sends the line of slope 1 to the line of slope -1"""
        g = kronecker.group.generators()[0]
        M = _kronecker_module(kronecker, 1, 1)
        assert twist(kronecker.action, g, M) == _kronecker_module(kronecker, 1, -1)

    def test_twist_moves_support_and_scales(self, ex51):
        """Test that twisting the star by g reads M at g(i) and multiplies by zeta^k"""
        g = ex51.group.generators()[0]
        level = ex51.action.level
        M = thin(ex51.quiver, ["1", "2"], level)
        twisted = twist(ex51.action, g, M)
        assert twisted.dimension_vector().support == ("1", "4")
        assert twisted.matrix("gamma") == ((CycScalar.root_of_unity(level, 3),),)

    def test_twist_needs_action_level(self, ex51):
        with pytest.raises(RepresentationError):
            twist(ex51.action, ex51.group.identity(), simple(ex51.quiver, "1", 1))

    def test_twist_stabilizer(self, kronecker):
        assert twist_stabilizer(kronecker.action, _kronecker_module(kronecker, 1, 1)).order == 1
        assert twist_stabilizer(kronecker.action, _kronecker_module(kronecker, 1, 0)).order == 2

    def test_sigma_module_of_a_line(self, kronecker):
        """Test that the orbit sum of a moved line is the sum of both slopes"""
        M = _kronecker_module(kronecker, 1, 1)
        S = sigma_module(kronecker.action, M)
        assert S.dims == {"1": 2, "2": 2}
        assert is_isomorphic(S, direct_sum([M, _kronecker_module(kronecker, 1, -1)])).isomorphic

    def test_sigma_module_of_a_leaf(self, ex51):
        """Test that the orbit sum of a leaf simple covers the three leaves"""
        N = simple(ex51.quiver, "2", ex51.action.level)
        S = sigma_module(ex51.action, N)
        assert S.dimension_vector() == ex51.maps.sigma(N.dimension_vector())

    def test_largest_coset_representatives(self, ex51):
        H = Subgroup(ex51.group, [(3,)])
        assert [g.exponents for g in coset_representatives(H)] == [(0,), (1,), (2,)]
        assert [g.exponents for g in coset_representatives(H, largest=True)] == [(3,), (4,), (5,)]

    def test_orbit_of_thin_module_on_mckay_quiver(self, ex51):
        """Test that a thin module over one arrow of Q-hat has six pairwise distinct twists over e1 + e2"""
        induced = ex51.mckay.induced
        X = thin(ex51.mckay.quiver, ["1:0", "2:1"], induced.level)
        orbit = twist_orbit(induced, X)
        assert len(orbit) == 6
        dims = {t.module.dimension_vector().coefficients for t in orbit}
        assert len(dims) == 6
        for t in orbit:
            assert ex51.maps.h(t.module.dimension_vector()) == LatticeVector(("1", "2"), (1, 1))


@pytest.mark.representations
class TestReflectionFunctors:
    """Test reflection functors and Dynkin indecomposables"""

    @pytest.fixture
    def a2(self):
        return Quiver(["1", "2"], [Arrow("a", "1", "2")])

    def test_plus_at_sink(self, a2):
        M = reflection_functor_plus(simple(a2, "1"), "2")
        assert M.dims == {"1": 1, "2": 1}
        assert M.quiver.arrow("a").source == "2"
        assert M.matrix("a") == ((CycScalar.one(1),),)

    def test_plus_needs_sink(self, a2):
        with pytest.raises(RepresentationError):
            reflection_functor_plus(simple(a2, "1"), "1")

    def test_minus_needs_source(self, a2):
        with pytest.raises(RepresentationError):
            reflection_functor_minus(simple(a2, "2"), "2")

    def test_minus_at_source(self, a2):
        M = reflection_functor_minus(simple(a2, "2"), "1")
        assert M.dims == {"1": 1, "2": 1}

    def test_star_indecomposables(self, ex51):
        """Test that the D4 star has one indecomposable per positive root"""
        modules = indecomposables_dynkin(ex51.quiver)
        assert len(modules) == 12
        assert max(m.total_dimension for m in modules) == 5
        assert len({m.dimension_vector().coefficients for m in modules}) == 12

    def test_affine_refused(self, kronecker):
        with pytest.raises(NotFiniteTypeError):
            indecomposables_dynkin(kronecker.quiver)


@pytest.mark.representations
class TestFoldedModules:
    """Test invariant modules and fiber modules over the folded roots"""

    @pytest.mark.parametrize("name", ["ex51", "ex52", "a3_flip"])
    def test_invariant_modules(self, request, name):
        report = verify_invariant_modules(request.getfixturevalue(name), seed=0)
        assert report.passed
        assert report.check("invariant_modules_over_real_roots").witness is None

    def test_star_summand_counts(self, ex51):
        """Test that the six G2 roots lift to orbit sums of 1 or 3 summands"""
        report = verify_invariant_modules(ex51, seed=0)
        assert len(report.data["modules"]) == 6
        assert {row["summands"] for row in report.data["modules"]} == {1, 3}

    @pytest.mark.slow
    def test_fiber_modules_star(self, ex51):
        report = verify_fiber_modules(ex51, seed=0)
        assert report.passed
        assert sum(row["modules"] for row in report.data["fibers"]) == 24

    def test_fiber_modules_two_copies(self, ex52):
        assert verify_fiber_modules(ex52, seed=0).passed

    def test_affine_refused(self, kronecker):
        with pytest.raises(NotFiniteTypeError):
            verify_invariant_modules(kronecker)
