"""
Unit tests for exact lattice arithmetic
"""

# Standard
from fractions import Fraction

# Third Party
import pytest
from hypothesis import assume, given, strategies as st

# Local
from polycover.errors import PolycoverError
from polycover.lattice import (
    columns_det,
    det3,
    hnf,
    IntMatrix3,
    is_unimodular_basis,
    LatticePoint,
    LinearForm,
    plane_lattice_basis,
    primitive,
    rational_point,
    solve3,
)

## Helpers #####################################################################

coords = st.integers(min_value=-30, max_value=30)
vectors = st.builds(LatticePoint, coords, coords, coords)
matrices = st.builds(IntMatrix3.from_columns, vectors, vectors, vectors)


def is_lower_hnf(H: IntMatrix3) -> bool:
    """Echelon shape with positive pivots and reduced entries left of them."""
    k = 0
    for i in range(3):
        if k == 3:
            break
        if any(H.entry(i, j) != 0 for j in range(k + 1, 3)):
            return False
        pivot = H.entry(i, k)
        if pivot == 0:
            continue
        if pivot < 0 or not all(0 <= H.entry(i, j) < pivot for j in range(k)):
            return False
        k += 1
    return True


## primitive ###################################################################

@pytest.mark.parametrize(
    "v, expected",
    [
        ((2, 4, 6), (1, 2, 3)),
        ((1, 0, 0), (1, 0, 0)),
        ((-3, 0, 6), (-1, 0, 2)),
    ],
)
def test_primitive_examples(v, expected):
    assert primitive(LatticePoint(*v)) == expected


def test_primitive_zero_vector():
    with pytest.raises(PolycoverError) as e:
        primitive(LatticePoint(0, 0, 0))
    assert e.value.code == "ZeroVector"


@given(v=vectors, k=st.integers(min_value=1, max_value=20))
def test_primitive_of_multiple(v, k):
    assume(not v.is_zero())
    p = primitive(v)
    assert primitive(v * k) == p
    assert primitive(p) == p


def test_rational_to_lattice():
    assert rational_point(Fraction(4, 2), -1, 0).to_lattice() == LatticePoint(2, -1, 0)
    with pytest.raises(PolycoverError) as e:
        rational_point(Fraction(1, 2), 0, 0).to_lattice()
    assert e.value.code == "NotIntegral"


## determinants ################################################################

@pytest.mark.parametrize(
    "columns, expected",
    [
        (((1, 0, 0), (0, 1, 0), (0, 0, 1)), 1),
        (((1, 0, 0), (0, 1, 0), (1, 1, 2)), 2),
        (((1, 0, 0), (0, 0, 1), (1, 2, 1)), -2),
    ],
)
def test_det3(columns, expected):
    assert det3(IntMatrix3.from_columns(*columns)) == expected


@pytest.mark.parametrize(
    "columns, expected",
    [
        (((1, 0, 0), (0, 1, 0), (0, 0, 1)), True),
        (((1, 0, 0), (0, 0, 1), (1, 2, 1)), False),
        (((1, 0, 0), (0, 1, 0), (1, 1, 1)), True),
    ],
)
def test_is_unimodular_basis(columns, expected):
    assert is_unimodular_basis(*(LatticePoint(*c) for c in columns)) == expected


def test_solve3_singular_basis():
    with pytest.raises(PolycoverError) as e:
        solve3((1, 0, 0), (2, 0, 0), (0, 0, 1), (1, 1, 1))
    assert e.value.code == "DegenerateInput"


## hnf #########################################################################

def test_hnf_identity():
    H, U = hnf(IntMatrix3.identity())
    assert H == IntMatrix3.identity()
    assert U == IntMatrix3.identity()


def test_hnf_diagonal():
    M = IntMatrix3.from_columns((2, 0, 0), (0, 2, 0), (0, 0, 2))
    H, _ = hnf(M)
    assert H == M


def test_hnf_counterexample_edges():
    H, U = hnf(IntMatrix3.from_columns((1, 0, 0), (0, 0, 1), (1, 2, 1)))
    assert abs(H.entry(0, 0) * H.entry(1, 1) * H.entry(2, 2)) == 2
    assert abs(det3(U)) == 1


@given(M=matrices)
def test_hnf_properties(M):
    H, U = hnf(M)
    assert abs(det3(U)) == 1
    assert M @ U == H
    assert is_lower_hnf(H)
    assert abs(det3(H)) == abs(det3(M))


## plane charts ################################################################

def test_plane_lattice_basis_horizontal():
    chart = plane_lattice_basis(LinearForm.of(0, 0, 1), 1)
    assert chart.origin == (0, 0, 1)
    assert chart.u.z == 0 and chart.v.z == 0
    assert chart.u.cross(chart.v) == (0, 0, 1)


def test_plane_lattice_basis_diagonal():
    a = LinearForm.of(1, 1, 1)
    chart = plane_lattice_basis(a, 0)
    assert a(chart.u) == 0 and a(chart.v) == 0
    assert abs(chart.basis_certificate) == 1


def test_plane_lattice_basis_not_primitive():
    with pytest.raises(PolycoverError) as e:
        plane_lattice_basis(LinearForm.of(2, 0, 0), 1)
    assert e.value.code == "NotPrimitive"


@given(a=vectors, c=st.integers(min_value=-10, max_value=10))
def test_plane_lattice_basis_properties(a, c):
    assume(not a.is_zero())
    form = LinearForm(primitive(a))
    chart = plane_lattice_basis(form, c)
    assert form(chart.unit) == 1
    assert form(chart.u) == 0 and form(chart.v) == 0
    assert abs(columns_det(chart.unit, chart.u, chart.v)) == 1
    # Counterclockwise seen from where the form increases.
    assert form(chart.u.cross(chart.v)) > 0
    assert form(chart.to_3d(3, -2)) == c
    assert chart.lattice_to_2d(chart.to_3d(3, -2)) == (3, -2)
