"""
Unit tests for the test-polytope generators
"""

# Third Party
import pytest

# Local
from polycover.analysis import check_centrally_symmetric, check_smooth
from polycover.errors import PolycoverError
from polycover.generators import (
    chisel,
    ChiselSpec,
    chiseled_cube,
    counterexample_simplex,
    cube,
    random_cs_smooth,
)
from polycover.geometry import convex_hull3, facet_polygon


def facet_vertex_sets(P):
    return [{P.vertices[i] for i in facet.vertices} for facet in P.facets]


## cubes #######################################################################

@pytest.mark.parametrize("n, points", [(1, 27), (2, 125), (3, 343)])
def test_cube(n, points):
    P = cube(n)
    assert len(P.vertices) == 8
    assert all(abs(c) == n for v in P.vertices for c in v)
    assert len(P.lattice_points()) == points
    assert check_smooth(P).is_smooth


def test_cube_size_must_be_positive():
    with pytest.raises(PolycoverError) as e:
        cube(0)
    assert e.value.code == "InvalidParameter"


def test_counterexample_simplex():
    P = counterexample_simplex()
    assert P.vertices == ((0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 2, 1))


## chiseling ###################################################################

def test_antipodal_chisel_of_cube2():
    P = chisel(cube(2), ChiselSpec((2, 2, 2), 1, antipodal=True))
    assert len(P.vertices) == 12
    assert len(P.facets) == 8
    assert check_smooth(P).is_smooth
    assert check_centrally_symmetric(P).origin_centered
    assert {(1, 2, 2), (2, 1, 2), (2, 2, 1)} in facet_vertex_sets(P)
    assert {(-1, -2, -2), (-2, -1, -2), (-2, -2, -1)} in facet_vertex_sets(P)


def test_chiseled_cube_matches_chisel():
    assert chiseled_cube(2, [(2, 2, 2)]) == chisel(cube(2), ChiselSpec((2, 2, 2), antipodal=True))


def test_chisel_unit_cube_corner():
    P = chisel(cube(1), ChiselSpec((1, 1, 1)))
    assert len(P.vertices) == 10
    index = facet_vertex_sets(P).index({(0, 1, 1), (1, 0, 1), (1, 1, 0)})
    assert facet_polygon(P, index).is_unimodular_triangle

    # The corner next to it now has an edge of length 1.
    with pytest.raises(PolycoverError) as e:
        chisel(P, ChiselSpec((1, 1, -1)))
    assert e.value.code == "ChiselTooDeep"


def test_chisel_missing_vertex():
    with pytest.raises(PolycoverError) as e:
        chisel(cube(2), ChiselSpec((2, 2, 0)))
    assert e.value.code == "NotAVertex"

    P = chisel(cube(1), ChiselSpec((1, 1, 1)))
    with pytest.raises(PolycoverError) as e:
        chisel(P, ChiselSpec((-1, -1, -1), antipodal=True))
    assert e.value.code == "NotAVertex"


def test_chisel_non_simple_vertex():
    pyramid = convex_hull3([(2, 2, 0), (2, -2, 0), (-2, 2, 0), (-2, -2, 0), (0, 0, 2)])
    with pytest.raises(PolycoverError) as e:
        chisel(pyramid, ChiselSpec((0, 0, 2)))
    assert e.value.code == "NotSimpleVertex"


def test_chisel_non_smooth_vertex():
    # Edges long enough to cut, but (1,0,0), (0,0,1), (1,2,1) span an index-2 sublattice.
    P = counterexample_simplex().scaled(3)
    with pytest.raises(PolycoverError) as e:
        chisel(P, ChiselSpec((0, 0, 0)))
    assert e.value.code == "NotSmoothVertex"
    assert e.value.witness == (0, 0, 0)


def test_chisel_depth_two():
    P = chisel(cube(3), ChiselSpec((3, 3, 3), 2))
    assert {(1, 3, 3), (3, 1, 3), (3, 3, 1)} in facet_vertex_sets(P)


def test_chisel_spec_validation():
    assert ChiselSpec([1, 2, 3]).vertex == (1, 2, 3)
    with pytest.raises(PolycoverError) as e:
        ChiselSpec((1, 1, 1), 0)
    assert e.value.code == "InvalidParameter"


def test_successive_chisels_of_cube3():
    P = chiseled_cube(3, [(3, 3, 3), (3, -3, 3)])
    assert len(P.vertices) == 16
    assert len(P.facets) == 10
    assert check_smooth(P).is_smooth
    assert check_centrally_symmetric(P).origin_centered


## random polytopes ############################################################

def test_random_is_deterministic():
    assert random_cs_smooth(0, 3, 2) == random_cs_smooth(0, 3, 2)


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_random_is_smooth_and_symmetric(seed):
    P = random_cs_smooth(seed, 3, 3)
    assert check_smooth(P).is_smooth
    assert check_centrally_symmetric(P).origin_centered


def test_random_without_chisels():
    assert random_cs_smooth(5, 2, 0) == cube(2)


def test_random_needs_nonnegative_chisels():
    with pytest.raises(PolycoverError) as e:
        random_cs_smooth(0, 2, -1)
    assert e.value.code == "InvalidParameter"
