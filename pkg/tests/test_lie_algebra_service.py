"""
Lie algebra and fixed-point tests
"""

import pytest
from sympy.polys.domains import QQ

from app.core.exceptions import NotFiniteTypeError
from app.models.cartan import CartanMatrix
from app.services.lie_algebra_service import (
    build_finite_lie_algebra,
    fixed_subalgebra,
    generated_subalgebra,
    lift_group_action,
    minimal_realization,
    orientation_matrix,
    verify_lie_algebra,
    verify_realization,
    verify_fixed_point_algebra,
)
from app.services.suite_service import fold_table_report


@pytest.mark.lie
class TestRealization:
    """Test minimal realizations of symmetrizable matrices"""

    def test_finite_type_has_no_center(self, ex51):
        realization = minimal_realization(ex51.C)
        assert realization.dimension == 2
        assert realization.center == ()

    def test_affine_rank_two(self, kronecker):
        """Test that the affine A1 matrix has a realization of dimension 3 with a one dimensional center"""
        realization = minimal_realization(kronecker.C)
        assert realization.dimension == 3
        assert len(realization.center) == 1
        assert realization.rank == 1

    def test_pairing_matrix_is_cartan(self, ex52, kronecker):
        """Test that eps_j(H_i) = c_ij"""
        for C in (ex52.C, kronecker.C):
            pairing = minimal_realization(C).pairing_matrix()
            assert pairing == [[QQ(x) for x in row] for row in C.rows()]

    def test_realization_folds(self, ex51, kronecker, cycle4):
        """Test that the fixed coroots of Q-hat realize the folded matrix"""
        for fixture in (ex51, kronecker, cycle4):
            report = verify_realization(fixture)
            assert report.passed, [c.name for c in report.checks if c.status.value == "fail"]


@pytest.mark.lie
class TestFiniteLieAlgebra:
    """Test the bracket model of finite-type symmetric matrices"""

    def test_a3(self, a3_flip):
        algebra = build_finite_lie_algebra(a3_flip.A)
        assert algebra.dimension == 15
        report = verify_lie_algebra(algebra, seed=3)
        assert report.passed
        assert report.data["dimension"] == 15

    def test_d4_with_orientation(self, ex51):
        """Test that the star orientation gives a valid D4 algebra"""
        algebra = build_finite_lie_algebra(ex51.A, ex51.quiver)
        assert algebra.dimension == 28
        assert verify_lie_algebra(algebra).passed

    def test_chevalley_relation(self, a3_flip):
        algebra = build_finite_lie_algebra(a3_flip.A)
        i = a3_flip.A.index[0]
        assert algebra.bracket(algebra.e(i), algebra.f(i)) == algebra.h(i)

    def test_orientation_matrix_default(self, a3_flip):
        """Test that without a quiver edges point from lower to higher index"""
        S = orientation_matrix(a3_flip.A)
        n = a3_flip.A.n
        for i in range(n):
            assert S[i][i] == 1
            for j in range(i):
                assert S[i][j] == 0

    def test_affine_refused(self, kronecker):
        with pytest.raises(NotFiniteTypeError):
            build_finite_lie_algebra(kronecker.A)

    def test_non_symmetric_refused(self):
        """Test that only symmetric matrices get a bracket model"""
        G2 = CartanMatrix.from_rows(["1", "2"], [[2, -3], [-1, 2]])
        with pytest.raises(NotFiniteTypeError):
            build_finite_lie_algebra(G2)


@pytest.mark.lie
class TestLiftedAction:
    """Test lifted automorphisms and fixed points"""

    def test_lift_has_group_order(self, ex52):
        algebra = build_finite_lie_algebra(ex52.A_hat, ex52.mckay.quiver)
        lifts = lift_group_action(algebra, ex52.mckay.induced)
        assert len(lifts) == 2
        assert any(not lift.is_identity for lift in lifts)
        for lift in lifts:
            assert lift.compose(lift).is_identity

    def test_trivial_group_fixes_everything(self, trivial_a3):
        algebra = build_finite_lie_algebra(trivial_a3.A_hat, trivial_a3.mckay.quiver)
        lifts = lift_group_action(algebra, trivial_a3.mckay.induced)
        assert fixed_subalgebra(algebra, lifts).dimension == algebra.dimension

    def test_fixed_subalgebra_of_flip(self, a3_flip):
        """Test that the flip of A3 fixes a ten dimensional subalgebra"""
        algebra = build_finite_lie_algebra(a3_flip.A_hat, a3_flip.mckay.quiver)
        fixed = fixed_subalgebra(algebra, lift_group_action(algebra, a3_flip.mckay.induced))
        assert fixed.dimension == 10
        assert fixed.closure

    def test_generated_by_chevalley_generators(self, a3_flip):
        algebra = build_finite_lie_algebra(a3_flip.A)
        generators = [algebra.e(i) for i in a3_flip.A.index] + [algebra.f(i) for i in a3_flip.A.index]
        assert generated_subalgebra(algebra, generators).dimension == 15


@pytest.mark.lie
class TestFixedPoints:
    """Test that the fixed points of g(Q-hat) give g(Gamma)"""

    def test_a3_flip(self, a3_flip):
        report = verify_fixed_point_algebra(a3_flip, seed=0)
        assert report.passed, [c.name for c in report.checks if c.status.value == "fail"]
        assert report.data["algebra_dimension"] == 15
        assert report.data["fixed_dimension"] == 10
        assert report.data["gamma_dimension"] == 10

    def test_two_copies_of_a5(self, ex52):
        """Test that the D4 algebra has a B3 fixed subalgebra"""
        report = verify_fixed_point_algebra(ex52)
        assert report.passed
        assert report.data["algebra_dimension"] == 28
        assert report.data["fixed_dimension"] == 21

    @pytest.mark.slow
    def test_star(self, ex51):
        """Test that g(D4 + D4) under Z/6 fixes a copy of g(G2)"""
        report = verify_fixed_point_algebra(ex51)
        assert report.passed
        assert report.data["algebra_dimension"] == 56
        assert report.data["fixed_dimension"] == 14
        assert report.data["gamma_type"] == "G2"
        assert report.data["hat_type"] == "D4 + D4"

    def test_affine_refused(self, kronecker):
        with pytest.raises(NotFiniteTypeError):
            verify_fixed_point_algebra(kronecker)


@pytest.mark.lie
class TestFoldTable:
    """Test the Z/2 folding table rows"""

    @pytest.mark.parametrize("n", [1, pytest.param(2, marks=pytest.mark.slow)])
    def test_dimensions(self, n):
        """Test that both rows give dim g(Gamma) = (n+1)(2n+3)"""
        report = fold_table_report(n, seed=0)
        assert report.passed
        for row in ("a-row", "d-row"):
            assert report.check(f"{row}.dimension_match").status.value == "pass"
            assert report.data[row]["fixed_dimension"] == (n + 1) * (2 * n + 3)

    def test_computed_types_are_recorded(self):
        report = fold_table_report(1, seed=0)
        assert report.data["a-row"]["hat"] == "D3" or report.data["a-row"]["hat"] == "A3"
        assert report.data["a-row"]["gamma"] == "B2"
        assert "stated" in report.data["d-row"]
