"""Shared fixtures: the two built-in demo instances as raw edge lists."""

import pytest

from cdskit.instance import CdsInstance

# 6-vertex instance whose qualified edges form the path
# (A1, B1, A2, B2, A3, B3); the edge {A2, B2} is internal to the
# unqualified path (B2, A1, B3, A2), so capacity 1/2 is out of reach.
FIG2_EDGES = [
    ("q", "A1", "B1"),
    ("q", "B1", "A2"),
    ("q", "A2", "B2"),
    ("q", "B2", "A3"),
    ("q", "A3", "B3"),
    ("u", "B2", "A1"),
    ("u", "A1", "B3"),
    ("u", "B3", "A2"),
    ("u", "B1", "A3"),
]

# 8-vertex feasible instance with two qualified components
# ({A1..B3} and {A4, B4}).
EXAMPLE1_EDGES = [
    ("q", "A1", "B1"),
    ("q", "B1", "A2"),
    ("q", "A2", "B2"),
    ("q", "B2", "A3"),
    ("q", "A3", "B3"),
    ("q", "A4", "B4"),
    ("u", "B1", "A3"),
    ("u", "A2", "B3"),
    ("u", "A1", "B4"),
    ("u", "B3", "A4"),
    ("u", "B2", "A4"),
]


@pytest.fixture
def fig2() -> CdsInstance:
    return CdsInstance.from_edges(FIG2_EDGES)


@pytest.fixture
def example1() -> CdsInstance:
    return CdsInstance.from_edges(EXAMPLE1_EDGES)
