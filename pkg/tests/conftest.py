import pytest

from helpers import FIXTURES, load_basis_matroid, load_text


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def m1_fixture():
    """Worked 2-matroid example, first matroid: (matroid, element names)."""
    return load_basis_matroid("matroid_m1.json")


@pytest.fixture(scope="session")
def m2_fixture():
    return load_basis_matroid("matroid_m2.json")


@pytest.fixture(scope="session")
def t123_text():
    return load_text("t123.ont")


@pytest.fixture(scope="session")
def t123_sensitive_text():
    return load_text("t123.sens")
