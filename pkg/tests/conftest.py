"""Shared fixtures: the three-task instance and the five-pair chain example."""

from pathlib import Path

import pytest

from potsolver.formats import parse_instance, parse_model
from potsolver.network import from_instance
from potsolver.orders import compose_with, ptop_at

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def tasks_instance():
    """T1 precedes T3, T1 || T2, T2 and T3 ordered either way (0=T1, 1=T2, 2=T3)."""
    return parse_instance((FIXTURES / "tasks.pot").read_bytes())


@pytest.fixture
def tasks_model():
    return parse_model((FIXTURES / "tasks.model").read_bytes())


@pytest.fixture
def five_pairs_instance():
    return parse_instance((FIXTURES / "five_pairs.pot").read_bytes())


@pytest.fixture
def five_pairs_scaffold():
    """Slots {0,1} {2,3} {4,5} {6,7} {8,9}: a_i = 2(i-1), b_i = 2i-1."""
    return ptop_at(10, 0)


@pytest.fixture
def five_pairs_network(five_pairs_instance, five_pairs_scaffold):
    return compose_with(five_pairs_scaffold, from_instance(five_pairs_instance))
