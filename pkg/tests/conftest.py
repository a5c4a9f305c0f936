from pathlib import Path

import pytest

from pistruct import Universe, canonical_p_structure

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def bool_u():
    """Two codes: an empty one and a one-point one."""
    return Universe.from_table({"0": [], "1": ["*"]})


@pytest.fixture(scope="session")
def v2_u():
    """Three codes with element counts 0, 1, 2."""
    return Universe.from_table({"0": [], "1": ["x0"], "2": ["x0", "x1"]})


@pytest.fixture(scope="session")
def b2_u():
    """Duplicate one-point codes, giving code-choice freedom."""
    return Universe.from_table({"0": [], "1a": ["*"], "1b": ["*"]})


@pytest.fixture(scope="session")
def bool_s(bool_u):
    return canonical_p_structure(bool_u)


@pytest.fixture(scope="session")
def b2_s(b2_u):
    return canonical_p_structure(b2_u)


@pytest.fixture(scope="session")
def data_dir():
    return DATA
