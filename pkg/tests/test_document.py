"""
Input document tests
"""

import json

import pytest

from app.core.exceptions import DocumentError
from app.schemas.document import InputDocument, load_document, parse_document
from app.utils import fixtures


def _raw(**overrides):
    document = {
        "name": "a2",
        "quiver": {"vertices": ["1", "2"], "arrows": [{"id": "a", "src": "1", "tgt": "2"}]},
        "group": {"orders": [2]},
        "action": {"generators": [
            {"vertex_perm": {"1": "1", "2": "2"}, "arrows": {"a": {"to": "a", "scalar_num": 1, "scalar_den": 2}}},
        ]},
    }
    document.update(overrides)
    return document


@pytest.mark.documents
class TestParseDocument:
    """Test schema validation of input documents"""

    def test_parse_dict(self):
        document = parse_document(_raw())
        assert document.name == "a2"
        assert document.level == 2

    def test_parse_json_text(self):
        document = parse_document(json.dumps(_raw()))
        assert document.to_quiver().vertices == ("1", "2")

    def test_level_is_lcm_of_orders_and_denominators(self):
        raw = _raw(group={"orders": [2]})
        raw["action"]["generators"][0]["arrows"]["a"]["scalar_den"] = 3
        assert parse_document(raw).level == 6

    @pytest.mark.parametrize("broken", [
        {"quiver": {"vertices": ["1", "1"], "arrows": []}},
        {"quiver": {"vertices": ["1", "2"], "arrows": [{"id": "a", "src": "1", "tgt": "3"}]}},
        {"group": {"orders": [0]}},
        {"group": {"orders": [2, 2]}},
    ])
    def test_schema_errors(self, broken):
        """Test that bad vertices, orders and generator counts raise DocumentError"""
        with pytest.raises(DocumentError):
            parse_document(_raw(**broken))

    def test_vertex_perm_must_be_bijection(self):
        raw = _raw()
        raw["action"]["generators"][0]["vertex_perm"] = {"1": "2", "2": "2"}
        with pytest.raises(DocumentError):
            parse_document(raw)

    def test_arrow_sent_to_unknown_arrow(self):
        raw = _raw()
        raw["action"]["generators"][0]["arrows"]["a"]["to"] = "b"
        with pytest.raises(DocumentError):
            parse_document(raw)

    def test_not_json(self):
        with pytest.raises(DocumentError):
            parse_document("{not json")


@pytest.mark.documents
class TestDocumentModels:
    """Test conversion between documents and models"""

    def test_scalars_become_exponents(self):
        """Test that zeta^(1/2) at level 2 is exponent 1"""
        action = parse_document(_raw()).to_action()
        assert action.level == 2
        g = action.group.generators()[0]
        assert action.element_action(g).arrow_map["a"] == ("a", 1)

    def test_from_models_reduces_scalars(self):
        """Test that the star exponent 3 at level 6 is written as 1/2"""
        document = fixtures.star_with_z6()
        quiver = document.to_quiver()
        rebuilt = InputDocument.from_models(quiver, document.to_action(quiver), name="ex51")
        image = rebuilt.action.generators[0].arrows["alpha"]
        assert (image.to, image.scalar_num, image.scalar_den) == ("beta", 1, 2)
        assert rebuilt.model_dump() == document.model_dump()


@pytest.mark.documents
class TestLoadDocument:
    """Test reading documents from disk"""

    def test_load(self, document_file):
        path = document_file(_raw())
        assert load_document(str(path)).name == "a2"

    def test_missing_file(self, tmp_path):
        with pytest.raises(DocumentError):
            load_document(str(tmp_path / "missing.json"))

    def test_invalid_file(self, document_file):
        path = document_file("[]")
        with pytest.raises(DocumentError):
            load_document(str(path))
