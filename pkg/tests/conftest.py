"""
Global pytest config, fixtures, and helpers go here!
"""

# Standard
import os
import sys

# Third Party
import pytest

# Make sure tests can import polycover
sys.path.append(
    os.path.realpath(os.path.join(os.path.dirname(__file__), ".."))
)

# Local
from polycover import generators  # noqa: E402
from polycover.geometry import convex_hull3  # noqa: E402


@pytest.fixture(scope="session")
def cube1():
    return generators.cube(1)


@pytest.fixture(scope="session")
def cube2():
    return generators.cube(2)


@pytest.fixture(scope="session")
def chiseled2():
    """cube(2) with the corners (2,2,2) and (-2,-2,-2) cut off at depth 1."""
    return generators.chiseled_cube(2, [(2, 2, 2)])


@pytest.fixture(scope="session")
def counterexample():
    return generators.counterexample_simplex()


@pytest.fixture(scope="session")
def unit_simplex():
    return convex_hull3([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
