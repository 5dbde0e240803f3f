"""
Unit tests for smoothness, symmetry, IDP and decompositions
"""

# Third Party
import pytest
from hypothesis import given, settings, strategies as st

# Local
from polycover.analysis import (
    check_centrally_symmetric,
    check_simple,
    check_smooth,
    decompose_in_parallelepiped,
    decompose_in_simplex,
    exhaustive_decomposition,
    idp_check,
    minkowski_pair_check,
    vertex_parallelepiped,
    vertex_parallelepiped_empty,
)
from polycover.errors import PolycoverError
from polycover.geometry import convex_hull3, Parallelepiped, Polytope3, Simplex3
from polycover.lattice import IntMatrix3, LatticePoint

## Helpers #####################################################################

E = [LatticePoint(0, 0, 0), LatticePoint(1, 0, 0), LatticePoint(0, 1, 0), LatticePoint(0, 0, 1)]
UNIT_SIMPLEX = Simplex3(tuple(E))
UNIT_BOX = Parallelepiped(LatticePoint(0, 0, 0), E[1], E[2], E[3])

# Elementary shears; products of them are unimodular.
SHEARS = [
    IntMatrix3.from_columns((1, 0, 0), (k, 1, 0), (0, 0, 1)) for k in (-2, -1, 1, 2)
] + [
    IntMatrix3.from_columns((1, 0, 0), (0, 1, 0), (0, k, 1)) for k in (-1, 1)
] + [
    IntMatrix3.from_columns((1, k, 0), (0, 1, 0), (0, 0, 1)) for k in (-1, 1)
]


@st.composite
def unimodular_simplices(draw):
    M = IntMatrix3.identity()
    for shear in draw(st.lists(st.sampled_from(SHEARS), max_size=4)):
        M = M @ shear
    shift = LatticePoint(*draw(st.tuples(*[st.integers(-3, 3)] * 3)))
    return Simplex3(tuple(M.apply(v) + shift for v in E))


## smoothness and symmetry #####################################################

def test_cube_is_smooth(cube1):
    assert check_simple(cube1)
    report = check_smooth(cube1)
    assert report.is_simple and report.is_smooth
    assert report.offending_vertices == []


def test_square_pyramid_is_not_simple():
    pyramid = convex_hull3([(1, 1, 0), (1, -1, 0), (-1, 1, 0), (-1, -1, 0), (0, 0, 1)])
    assert not check_simple(pyramid)
    report = check_smooth(pyramid)
    assert not report.is_simple
    (apex,) = report.offending_vertices
    assert apex.vertex == (0, 0, 1)
    assert apex.determinant is None


def test_counterexample_is_simple_not_smooth(counterexample):
    assert check_simple(counterexample)
    report = check_smooth(counterexample)
    assert not report.is_smooth
    origin = next(o for o in report.offending_vertices if o.vertex == (0, 0, 0))
    assert abs(origin.determinant) == 2


def test_chiseled_cube_is_smooth(chiseled2):
    assert check_smooth(chiseled2).is_smooth


def test_central_symmetry(cube1, counterexample):
    report = check_centrally_symmetric(cube1)
    assert report.symmetric and report.origin_centered
    assert report.center == (0, 0, 0)

    assert not check_centrally_symmetric(counterexample).symmetric

    shifted = check_centrally_symmetric(cube1.translated(LatticePoint(1, 0, 0)))
    assert shifted.symmetric
    assert shifted.center == (1, 0, 0)
    assert not shifted.origin_centered


## vertex parallelepipeds ######################################################

def test_vertex_parallelepiped_of_cube(cube1):
    Q = vertex_parallelepiped(cube1, (1, 1, 1))
    assert set(Q.edges) == {(-1, 0, 0), (0, -1, 0), (0, 0, -1)}
    assert vertex_parallelepiped_empty(cube1, (1, 1, 1))


def test_vertex_parallelepiped_of_counterexample(counterexample):
    assert not vertex_parallelepiped_empty(counterexample, (0, 0, 0))


def test_vertex_parallelepiped_not_simple():
    pyramid = convex_hull3([(1, 1, 0), (1, -1, 0), (-1, 1, 0), (-1, -1, 0), (0, 0, 1)])
    with pytest.raises(PolycoverError) as e:
        vertex_parallelepiped(pyramid, (0, 0, 1))
    assert e.value.code == "NotSimpleVertex"


def test_smooth_vertices_have_empty_parallelepipeds(chiseled2):
    for i in range(len(chiseled2.vertices)):
        assert vertex_parallelepiped_empty(chiseled2, i)


## IDP #########################################################################

def test_counterexample_fails_idp(counterexample):
    report = idp_check(counterexample, 2)
    assert not report.is_idp_up_to
    assert report.failure.n == 2
    assert report.failure.witness == (1, 1, 1)


def test_cube_is_idp(cube1):
    report = idp_check(cube1, 3)
    assert report.is_idp_up_to
    assert report.checked_up_to == 3
    assert report.failure is None


def test_unit_simplex_is_idp(unit_simplex):
    assert idp_check(unit_simplex, 4).is_idp_up_to


def test_idp_check_stops_at_first_failure(counterexample, monkeypatch):
    dilations = []
    scaled = Polytope3.scaled

    def counting_scaled(self, k):
        dilations.append(k)
        return scaled(self, k)

    monkeypatch.setattr(Polytope3, "scaled", counting_scaled)
    report = idp_check(counterexample, 6)
    assert report.failure.n == 2
    assert max(dilations) == 2


def test_idp_check_needs_two(cube1):
    with pytest.raises(PolycoverError) as e:
        idp_check(cube1, 1)
    assert e.value.code == "InvalidParameter"


def test_minkowski_pair_check(cube1, counterexample):
    assert minkowski_pair_check(counterexample, counterexample) == (False, (1, 1, 1))
    assert minkowski_pair_check(cube1, cube1).holds
    assert minkowski_pair_check(counterexample, (5, -2, 7)).holds


## decompositions ##############################################################

def test_decompose_in_simplex():
    assert decompose_in_simplex(UNIT_SIMPLEX, (1, 1, 0), 2).parts == [E[1], E[2]]
    assert decompose_in_simplex(UNIT_SIMPLEX, (0, 0, 0), 3).parts == [E[0]] * 3


def test_decompose_in_simplex_errors(counterexample):
    with pytest.raises(PolycoverError) as e:
        decompose_in_simplex(UNIT_SIMPLEX, (2, 1, 0), 2)
    assert e.value.code == "OutsideDilate"
    with pytest.raises(PolycoverError) as e:
        decompose_in_simplex(counterexample.vertices, (1, 1, 1), 2)
    assert e.value.code == "NotUnimodular"


@settings(max_examples=30, deadline=None)
@given(S=unimodular_simplices(), n=st.integers(min_value=1, max_value=3), data=st.data())
def test_decompose_in_random_unimodular_simplex(S, n, data):
    assert S.is_unimodular
    dilate = convex_hull3([v * n for v in S.vertices])
    p = data.draw(st.sampled_from(dilate.lattice_points()))
    witness = decompose_in_simplex(S, p, n)
    assert witness.verify(p, set(S.lattice_points()))


def test_decompose_in_unit_box():
    witness = decompose_in_parallelepiped(UNIT_BOX, (1, 2, 1), 2)
    assert witness.verify((1, 2, 1), set(UNIT_BOX.lattice_points()))


def test_decompose_in_symmetric_box():
    # conv(D, -D) for the top unit square D of [-1, 1]^3 anchored at (0, 0, 1).
    Q = Parallelepiped(LatticePoint(-1, -1, -1), E[1], E[2], LatticePoint(1, 1, 2))
    assert decompose_in_parallelepiped(Q, (0, 0, 0), 1).parts == [(0, 0, 0)]
    with pytest.raises(PolycoverError) as e:
        decompose_in_parallelepiped(Q, (0, 0, 3), 1)
    assert e.value.code == "OutsideDilate"


def test_every_box_point_decomposes():
    Q = Parallelepiped(LatticePoint(-1, -1, -1), E[1], E[2], LatticePoint(1, 1, 2))
    points = set(Q.lattice_points())
    for p in convex_hull3([v * 2 for v in Q.corners]).lattice_points():
        assert decompose_in_parallelepiped(Q, p, 2).verify(p, points)


def test_exhaustive_decomposition(cube1, counterexample):
    assert exhaustive_decomposition(cube1, (2, 2, 2), 2).parts == [(1, 1, 1), (1, 1, 1)]
    with pytest.raises(PolycoverError) as e:
        exhaustive_decomposition(counterexample, (1, 1, 1), 2)
    assert e.value.code == "NoDecomposition"
    assert e.value.witness == (1, 1, 1)
