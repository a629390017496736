"""
Test configuration and fixtures
"""

import json

import pytest

from app.services.suite_service import fixture_from_document
from app.utils import fixtures


@pytest.fixture(scope="session")
def ex51_document():
    """
    D4 star with Z/6
    """
    return fixtures.star_with_z6()


@pytest.fixture(scope="session")
def ex51(ex51_document):
    """
    Built folding data for the D4 star; shared because Q-hat construction is slow
    """
    return fixture_from_document(ex51_document)


@pytest.fixture(scope="session")
def ex52():
    """
    Two copies of A5 with Z/2 x Z/2
    """
    return fixture_from_document(fixtures.two_a5_copies())


@pytest.fixture(scope="session")
def a3_flip():
    return fixture_from_document(fixtures.a3_flip())


@pytest.fixture(scope="session")
def trivial_a3():
    """
    A3 with the trivial group, so Q-hat = Q and Gamma = Q
    """
    return fixture_from_document(fixtures.trivial_action(fixtures.a3_flip()))


@pytest.fixture(scope="session")
def cycle4():
    return fixture_from_document(fixtures.cycle4())


@pytest.fixture(scope="session")
def kronecker():
    return fixture_from_document(fixtures.kronecker())


@pytest.fixture(scope="function")
def document_file(tmp_path):
    """
    Write a document dict to a temporary JSON file and return its path
    """
    def write(payload, name: str = "input.json"):
        path = tmp_path / name
        if isinstance(payload, str):
            path.write_text(payload, encoding="utf-8")
        else:
            path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return write
