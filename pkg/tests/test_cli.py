"""
Command line tests
"""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest
from typer.testing import CliRunner

from app.commands.common import EXIT_CHECK_FAILED, EXIT_INVALID_ACTION, EXIT_OK, EXIT_SCHEMA
from app.main import app
from app.utils import fixtures


runner = CliRunner()


def _dump(document) -> dict:
    return document.model_dump()


@pytest.mark.cli
class TestDocumentCommands:
    """Test commands that read an input document"""

    def test_mckay(self, document_file, tmp_path):
        path = document_file(_dump(fixtures.star_with_z6()))
        out = tmp_path / "reports"
        result = runner.invoke(app, ["mckay", str(path), "--out", str(out)])
        assert result.exit_code == EXIT_OK, result.output
        report = json.loads((out / "mckay-ex51.json").read_text())
        assert report["command"] == "mckay"
        assert all(c["status"] != "fail" for c in report["checks"])
        assert (out / "mckay-ex51.txt").exists()

    def test_fold(self, document_file, tmp_path):
        path = document_file(_dump(fixtures.two_a5_copies()))
        result = runner.invoke(app, ["fold", str(path), "--out", str(tmp_path)])
        assert result.exit_code == EXIT_OK, result.output
        assert (tmp_path / "fold-ex52.json").exists()

    def test_roots_with_height(self, document_file, tmp_path):
        path = document_file(_dump(fixtures.kronecker()))
        result = runner.invoke(app, ["roots", str(path), "--height", "4", "--out", str(tmp_path)])
        assert result.exit_code == EXIT_OK, result.output

    def test_unnamed_document_uses_file_stem(self, document_file, tmp_path):
        raw = _dump(fixtures.cycle4())
        raw["name"] = ""
        path = document_file(raw, name="square.json")
        result = runner.invoke(app, ["mckay", str(path), "--out", str(tmp_path)])
        assert result.exit_code == EXIT_OK, result.output
        assert (tmp_path / "mckay-square.json").exists()

    def test_schema_error(self, document_file, tmp_path):
        """Test that a document failing the schema exits with 2"""
        path = document_file({"quiver": {"vertices": []}})
        result = runner.invoke(app, ["mckay", str(path), "--out", str(tmp_path)])
        assert result.exit_code == EXIT_SCHEMA

    def test_missing_file(self, tmp_path):
        result = runner.invoke(app, ["fold", str(tmp_path / "none.json"), "--out", str(tmp_path)])
        assert result.exit_code == EXIT_SCHEMA

    def test_invalid_action(self, document_file, tmp_path):
        """Test that an action with an arrow inside an orbit exits with 3"""
        path = document_file({
            "name": "swap",
            "quiver": {"vertices": ["1", "2"], "arrows": [
                {"id": "a", "src": "1", "tgt": "2"}, {"id": "b", "src": "2", "tgt": "1"},
            ]},
            "group": {"orders": [2]},
            "action": {"generators": [{
                "vertex_perm": {"1": "2", "2": "1"},
                "arrows": {"a": {"to": "b"}, "b": {"to": "a"}},
            }]},
        })
        result = runner.invoke(app, ["mckay", str(path), "--out", str(tmp_path)])
        assert result.exit_code == EXIT_INVALID_ACTION
        assert "admissibility" in result.output


@pytest.mark.cli
class TestVerifyCommands:
    """Test the verification suites"""

    def test_duality(self, document_file, tmp_path):
        path = document_file(_dump(fixtures.a3_flip()))
        result = runner.invoke(app, ["verify", "duality", str(path), "--out", str(tmp_path)])
        assert result.exit_code == EXIT_OK, result.output

    def test_roots_correspondence_on_affine(self, document_file, tmp_path):
        """Test that a bounded affine run exits 0 with inconclusive checks"""
        path = document_file(_dump(fixtures.kronecker()))
        result = runner.invoke(app, ["verify", "thm1.1", str(path), "--height", "4", "--out", str(tmp_path)])
        assert result.exit_code == EXIT_OK, result.output
        report = json.loads((tmp_path / "verify-thm1.1-kronecker.json").read_text())
        statuses = {c["name"]: c["status"] for c in report["checks"]}
        assert statuses["h_surjective"] == "inconclusive"

    def test_fixed_points_refused_outside_finite_type(self, document_file, tmp_path):
        path = document_file(_dump(fixtures.kronecker()))
        result = runner.invoke(app, ["verify", "thm1.2", str(path), "--out", str(tmp_path)])
        assert result.exit_code == EXIT_CHECK_FAILED

    def test_fixed_points(self, document_file, tmp_path):
        path = document_file(_dump(fixtures.a3_flip()))
        result = runner.invoke(app, ["--log-level", "WARNING", "verify", "thm1.2", str(path), "--out", str(tmp_path)])
        assert result.exit_code == EXIT_OK, result.output


@pytest.mark.cli
class TestExampleCommands:
    """Test the built-in examples"""

    def test_fold_table(self, tmp_path):
        result = runner.invoke(app, ["examples", "fold-table", "--n", "1", "--seed", "0", "--out", str(tmp_path)])
        assert result.exit_code == EXIT_OK, result.output
        report = json.loads((tmp_path / "examples-fold-table-n=1.json").read_text())
        assert report["seed"] == 0
        assert report["data"]["a-row"]["fixed_dimension"] == 10

    def test_fold_table_needs_positive_n(self, tmp_path):
        result = runner.invoke(app, ["examples", "fold-table", "--n", "0", "--out", str(tmp_path)])
        assert result.exit_code == 2

    def test_ex52(self, tmp_path):
        result = runner.invoke(app, ["examples", "ex52", "--out", str(tmp_path)])
        assert result.exit_code == EXIT_OK, result.output
        assert (tmp_path / "examples-ex52-ex52.json").exists()

    @pytest.mark.slow
    def test_ex51(self, tmp_path):
        result = runner.invoke(app, ["examples", "ex51", "--seed", "1", "--out", str(tmp_path)])
        assert result.exit_code == EXIT_OK, result.output
        report = json.loads((tmp_path / "examples-ex51-ex51.json").read_text())
        assert report["data"]["thm1.2.fixed_dimension"] == 14


@pytest.mark.cli
@pytest.mark.slow
class TestReproducibility:
    """Test that reports do not depend on the interpreter's hash seed"""

    def _run(self, out: Path, hash_seed: str) -> bytes:
        env = {**os.environ, "PYTHONHASHSEED": hash_seed}
        completed = subprocess.run(
            [sys.executable, "-m", "app.main", "examples", "ex52", "--seed", "0", "--out", str(out)],
            cwd=Path(__file__).resolve().parents[1],
            env=env,
            capture_output=True,
        )
        assert completed.returncode == EXIT_OK, completed.stderr.decode()
        return (out / "examples-ex52-ex52.json").read_bytes()

    def test_ex52_is_byte_identical(self, tmp_path):
        first = self._run(tmp_path / "first", "1")
        second = self._run(tmp_path / "second", "2")
        assert first == second
        assert json.loads(first)["data"]["duality.double_mckay"]["vertex_map"]
