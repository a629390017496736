"""
Folded Cartan matrix and classification tests
"""

import pytest

from app.core.exceptions import InvalidQuiverError, NotSymmetrizableError
from app.models.cartan import CartanMatrix
from app.models.quiver import Arrow, Quiver
from app.services.cartan_service import (
    cartan_of_quiver,
    classify,
    corank,
    dual_check,
    fold_cartan,
    symmetrized_form,
    symmetrizer,
    validate_gcm,
)
from app.utils import fixtures


def _chain(n: int) -> Quiver:
    vertices = [str(k) for k in range(1, n + 1)]
    return Quiver(vertices, [Arrow(f"a{k}", vertices[k], vertices[k + 1]) for k in range(n - 1)])


def _star(arms) -> Quiver:
    """Star with a center 0 and arms of the given lengths"""
    vertices, arrows = ["0"], []
    for a, length in enumerate(arms):
        previous = "0"
        for step in range(length):
            name = f"{a}.{step}"
            vertices.append(name)
            arrows.append(Arrow(f"x{a}.{step}", previous, name))
            previous = name
    return Quiver(vertices, arrows)


def _cartan(rows) -> CartanMatrix:
    return CartanMatrix.from_rows([str(k) for k in range(len(rows))], rows)


@pytest.mark.cartan
class TestCartanOfQuiver:
    """Test symmetric Cartan matrices of quivers"""

    def test_kronecker(self):
        """Test that two parallel arrows give -2 off the diagonal"""
        quiver = fixtures.kronecker().to_quiver()
        assert cartan_of_quiver(quiver).rows() == [[2, -2], [-2, 2]]

    def test_orientation_does_not_matter(self):
        forward = Quiver(["1", "2"], [Arrow("a", "1", "2")])
        backward = Quiver(["1", "2"], [Arrow("a", "2", "1")])
        assert cartan_of_quiver(forward) == cartan_of_quiver(backward)

    def test_loops_refused(self):
        """Test that a quiver with a loop has no Cartan matrix"""
        with pytest.raises(InvalidQuiverError):
            cartan_of_quiver(Quiver(["1"], [Arrow("l", "1", "1")]))


@pytest.mark.cartan
class TestFolding:
    """Test (B, D, C) on orbit representatives"""

    def test_star_folds_to_g2(self, ex51):
        """Test that the D4 star with Z/6 folds to G2"""
        folded = ex51.folded
        assert folded.index == ("1", "2")
        assert folded.B.rows() == [[2, -3], [-3, 6]]
        assert folded.D == (1, 3)
        assert folded.C.rows() == [[2, -3], [-1, 2]]
        assert folded.edge_labels == {("1", "2"): (1, 3)}
        assert str(classify(folded.C)) == "G2"

    def test_two_copies_of_a5(self, ex52):
        """Test the folded matrix of two A5 copies under Z/2 x Z/2"""
        assert ex52.C.rows() == [[2, -1, 0], [-1, 2, -1], [0, -2, 2]]
        assert ex52.folded.D == (4, 4, 2)
        assert str(classify(ex52.C)) == "B3"
        assert str(classify(ex52.C.transpose())) == "C3"

    def test_affine_folds(self, cycle4, kronecker):
        """Test that the rotated four-cycle and the Kronecker quiver fold to affine A1"""
        for fixture in (cycle4, kronecker):
            assert fixture.C.rows() == [[2, -2], [-2, 2]]
            assert classify(fixture.C).kind == "affine"
            assert corank(fixture.C) == 1

    def test_trivial_group_folds_to_itself(self, trivial_a3):
        assert trivial_a3.C.restrict(trivial_a3.A.index) == trivial_a3.A
        assert trivial_a3.folded.D == (1, 1, 1)

    def test_d_is_a_symmetrizer(self, ex51, ex52, a3_flip):
        """Test that D C = B is symmetric for every fold"""
        for fixture in (ex51, ex52, a3_flip):
            folded = fixture.folded
            assert folded.B.symmetric
            for k, row in enumerate(folded.C.matrix):
                assert [folded.D[k] * c for c in row] == list(folded.B.matrix[k])

    def test_arrow_inside_orbit_refused(self, a3_flip):
        """Test that folding refuses orbit data whose orbit contains an arrow"""
        od = a3_flip.orbit_data
        quiver = Quiver(a3_flip.quiver.vertices, list(a3_flip.quiver.arrows) + [Arrow("z", "1", "1'")])
        with pytest.raises(InvalidQuiverError):
            fold_cartan(quiver, od)


@pytest.mark.cartan
class TestSymmetrizer:
    """Test symmetrizers and generalized Cartan matrix validation"""

    def test_symmetrizer_of_b2(self):
        assert symmetrizer(_cartan([[2, -1], [-2, 2]])) == (2, 1)

    def test_symmetrizer_of_g2(self):
        assert symmetrizer(_cartan([[2, -3], [-1, 2]])) == (1, 3)

    def test_symmetrized_form(self):
        """Test that D C is symmetric"""
        form = symmetrized_form(_cartan([[2, -1, 0], [-1, 2, -1], [0, -2, 2]]))
        assert form.matrix == ((4, -2, 0), (-2, 4, -2), (0, -2, 2))

    def test_cycle_condition(self):
        """Test that a matrix failing the cycle condition is not symmetrizable"""
        with pytest.raises(NotSymmetrizableError):
            symmetrizer(_cartan([[2, -1, -1], [-2, 2, -1], [-1, -1, 2]]))

    @pytest.mark.parametrize("rows", [
        [[3, -1], [-1, 2]],
        [[2, 1], [1, 2]],
        [[2, -1], [0, 2]],
    ])
    def test_invalid_gcm(self, rows):
        """Test that bad diagonals, positive entries and asymmetric zeros are refused"""
        with pytest.raises(NotSymmetrizableError):
            validate_gcm(_cartan(rows))


@pytest.mark.cartan
class TestClassification:
    """Test finite, affine and indefinite classification with Dynkin labels"""

    @pytest.mark.parametrize("quiver, label", [
        (_chain(1), "A1"),
        (_chain(4), "A4"),
        (_star([1, 1, 1]), "D4"),
        (_star([1, 1, 3]), "D6"),
        (_star([1, 2, 2]), "E6"),
        (_star([1, 2, 3]), "E7"),
        (_star([1, 2, 4]), "E8"),
    ])
    def test_simply_laced_labels(self, quiver, label):
        classification = classify(cartan_of_quiver(quiver))
        assert classification.is_finite
        assert str(classification) == label

    @pytest.mark.parametrize("rows, label", [
        ([[2, -3], [-1, 2]], "G2"),
        ([[2, -1], [-2, 2]], "B2"),
        ([[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]], "F4"),
        ([[2, -1, 0], [-1, 2, -1], [0, -2, 2]], "B3"),
        ([[2, -1, 0], [-1, 2, -2], [0, -1, 2]], "C3"),
    ])
    def test_multiply_laced_labels(self, rows, label):
        assert str(classify(_cartan(rows))) == label

    def test_affine_and_indefinite(self):
        """Test the affine A1 and an indefinite rank 2 matrix"""
        assert classify(_cartan([[2, -2], [-2, 2]])).kind == "affine"
        assert classify(_cartan([[2, -3], [-3, 2]])).kind == "indefinite"
        assert classify(cartan_of_quiver(_star([1, 1, 1, 1]))).kind == "affine"
        assert classify(cartan_of_quiver(_star([2, 2, 2]))).kind == "affine"

    def test_components(self):
        """Test that disconnected matrices are classified per component"""
        quiver = Quiver(["1", "2", "3"], [Arrow("a", "1", "2")])
        classification = classify(cartan_of_quiver(quiver))
        assert str(classification) == "A2 + A1"
        assert classification.labels == ["A2", "A1"]


@pytest.mark.cartan
class TestDuality:
    """Test that folding the McKay quiver gives the transposed matrix"""

    @pytest.mark.parametrize("factory", [
        fixtures.two_a5_copies, fixtures.a3_flip, fixtures.kronecker, fixtures.cycle4,
    ])
    def test_dual_check_passes(self, factory):
        document = factory()
        quiver = document.to_quiver()
        report = dual_check(quiver, document.to_action(quiver))
        assert report.passed
        assert report.data["C_hat"] == [list(col) for col in zip(*report.data["C"])]

    def test_star_dual_is_g2_transposed(self, ex51):
        """Test that D-hat = |G| D^-1 for the star with Z/6"""
        dual = fold_cartan(ex51.mckay.quiver, ex51.mckay_orbits)
        assert sorted(dual.D) == [2, 6]
        assert str(classify(dual.C)) == "G2"
