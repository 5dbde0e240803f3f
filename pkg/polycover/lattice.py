# Exact integer / rational linear algebra in dimension 3.
#
# Everything here works on Python ints and fractions.Fraction so that
# coordinates can grow without overflow (dilates, chisel sequences).

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Tuple, Union

import numpy as np

from polycover.errors import PolycoverError

Rational = Union[int, Fraction]


##########################################################################
###                          points and vectors                        ###


def _combine(lhs, rhs, op):
    values = (op(lhs[0], rhs[0]), op(lhs[1], rhs[1]), op(lhs[2], rhs[2]))
    if isinstance(lhs, LatticePoint) and isinstance(rhs, LatticePoint):
        return LatticePoint(*values)
    return rational_point(*values)


def _scale(vec, k):
    values = (vec[0] * k, vec[1] * k, vec[2] * k)
    if isinstance(vec, LatticePoint) and isinstance(k, int):
        return LatticePoint(*values)
    return rational_point(*values)


class LatticePoint(NamedTuple):
    x: int
    y: int
    z: int

    def __add__(self, other):
        return _combine(self, other, lambda a, b: a + b)

    def __sub__(self, other):
        return _combine(self, other, lambda a, b: a - b)

    def __neg__(self):
        return LatticePoint(-self.x, -self.y, -self.z)

    def __mul__(self, k):
        return _scale(self, k)

    __rmul__ = __mul__

    def dot(self, other) -> Rational:
        return self.x * other[0] + self.y * other[1] + self.z * other[2]

    def cross(self, other):
        return _cross(self, other)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0 and self.z == 0

    def __repr__(self):
        return f"({self.x},{self.y},{self.z})"


class RationalPoint(NamedTuple):
    x: Fraction
    y: Fraction
    z: Fraction

    def __add__(self, other):
        return _combine(self, other, lambda a, b: a + b)

    def __sub__(self, other):
        return _combine(self, other, lambda a, b: a - b)

    def __neg__(self):
        return RationalPoint(-self.x, -self.y, -self.z)

    def __mul__(self, k):
        return _scale(self, k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return rational_point(self.x / k, self.y / k, self.z / k)

    def dot(self, other) -> Fraction:
        return self.x * other[0] + self.y * other[1] + self.z * other[2]

    def cross(self, other):
        return _cross(self, other)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0 and self.z == 0

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self)

    def to_lattice(self) -> LatticePoint:
        if not self.is_integral():
            raise PolycoverError("NotIntegral", f"{self!r} is not a lattice point")
        return LatticePoint(int(self.x), int(self.y), int(self.z))

    def __repr__(self):
        return "(" + ",".join(str(c) for c in self) + ")"


Point = Union[LatticePoint, RationalPoint]


def rational_point(x: Rational, y: Rational, z: Rational) -> RationalPoint:
    return RationalPoint(Fraction(x), Fraction(y), Fraction(z))


def as_rational(p: Point) -> RationalPoint:
    return p if isinstance(p, RationalPoint) else rational_point(*p)


def _cross(a, b):
    values = (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
    if isinstance(a, LatticePoint) and isinstance(b, LatticePoint):
        return LatticePoint(*values)
    return rational_point(*values)


def dot(a: Sequence[Rational], b: Sequence[Rational]) -> Rational:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def vector_sum(points: Iterable[LatticePoint]) -> LatticePoint:
    total = LatticePoint(0, 0, 0)
    for p in points:
        total = total + p
    return total


ORIGIN = LatticePoint(0, 0, 0)


def lattice_length(v: LatticePoint) -> int:
    """Number of lattice steps along v, i.e. gcd of its coordinates."""
    return math.gcd(v.x, v.y, v.z)


def primitive(v: LatticePoint) -> LatticePoint:
    if v.is_zero():
        raise PolycoverError("ZeroVector", "primitive vector of 0 is undefined")
    g = lattice_length(v)
    return LatticePoint(v.x // g, v.y // g, v.z // g)


##########################################################################
###                               forms                                ###


@dataclass(frozen=True)
class LinearForm:
    """The functional x -> a.x for an integer coefficient vector a."""

    a: LatticePoint

    def __call__(self, x: Sequence[Rational]) -> Rational:
        return dot(self.a, x)

    @property
    def is_primitive(self) -> bool:
        return not self.a.is_zero() and lattice_length(self.a) == 1

    def primitive(self) -> "LinearForm":
        return LinearForm(primitive(self.a))

    def __neg__(self) -> "LinearForm":
        return LinearForm(-self.a)

    @classmethod
    def of(cls, x: int, y: int, z: int) -> "LinearForm":
        return cls(LatticePoint(x, y, z))


##########################################################################
###                         3x3 integer matrices                       ###


@dataclass(frozen=True)
class IntMatrix3:
    # Columns are the vectors; entry (i, j) is columns[j][i].
    columns: Tuple[LatticePoint, LatticePoint, LatticePoint]

    @classmethod
    def from_columns(cls, c0, c1, c2) -> "IntMatrix3":
        return cls((LatticePoint(*c0), LatticePoint(*c1), LatticePoint(*c2)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix3":
        return cls.from_columns(*zip(*rows))

    @classmethod
    def identity(cls) -> "IntMatrix3":
        return cls.from_columns((1, 0, 0), (0, 1, 0), (0, 0, 1))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "IntMatrix3":
        return cls.from_columns(*(tuple(int(arr[i, j]) for i in range(3)) for j in range(3)))

    def to_array(self) -> np.ndarray:
        return np.array([[self.entry(i, j) for j in range(3)] for i in range(3)], dtype=object)

    def entry(self, i: int, j: int) -> int:
        return self.columns[j][i]

    def apply(self, v: Sequence[Rational]) -> Point:
        c0, c1, c2 = self.columns
        return c0 * v[0] + c1 * v[1] + c2 * v[2]

    def __matmul__(self, other: "IntMatrix3") -> "IntMatrix3":
        return IntMatrix3(tuple(self.apply(col) for col in other.columns))


def columns_det(e1: Sequence[Rational], e2: Sequence[Rational], e3: Sequence[Rational]) -> Rational:
    return dot(e1, _cross(e2, e3))


def det3(M: IntMatrix3) -> int:
    return columns_det(*M.columns)


def is_unimodular_basis(e1: LatticePoint, e2: LatticePoint, e3: LatticePoint) -> bool:
    return abs(columns_det(e1, e2, e3)) == 1


def solve3(e1, e2, e3, x) -> Tuple[Fraction, Fraction, Fraction]:
    """Coordinates of x in the basis (e1, e2, e3), by Cramer's rule."""
    d = columns_det(e1, e2, e3)
    if d == 0:
        raise PolycoverError("DegenerateInput", "basis vectors are linearly dependent")
    return (
        Fraction(columns_det(x, e2, e3), d),
        Fraction(columns_det(e1, x, e3), d),
        Fraction(columns_det(e1, e2, x), d),
    )


def ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf(M: IntMatrix3) -> Tuple[IntMatrix3, IntMatrix3]:
    """Column Hermite normal form.

    Returns (H, U) with H == M @ U, U unimodular, H lower triangular (echelon
    for singular M) with positive pivots and the entries left of each pivot
    reduced into [0, pivot).
    """
    H = M.to_array()
    U = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=object)
    k = 0
    for i in range(3):
        if k == 3:
            break
        # Gather gcd of row i (columns k..2) into column k with
        # determinant-one column operations.
        for j in range(k + 1, 3):
            a, b = H[i, k], H[i, j]
            if b == 0:
                continue
            g, s, t = ext_gcd(a, b)
            T = np.array([[s, -b // g], [t, a // g]], dtype=object)
            H[:, [k, j]] = H[:, [k, j]].dot(T)
            U[:, [k, j]] = U[:, [k, j]].dot(T)
        if H[i, k] == 0:
            continue
        if H[i, k] < 0:
            H[:, k] = -H[:, k]
            U[:, k] = -U[:, k]
        for j in range(k):
            q = H[i, j] // H[i, k]
            if q:
                H[:, j] = H[:, j] - q * H[:, k]
                U[:, j] = U[:, j] - q * U[:, k]
        k += 1
    return IntMatrix3.from_array(H), IntMatrix3.from_array(U)


##########################################################################
###                        lattice planes / charts                     ###


@dataclass(frozen=True)
class PlaneChart:
    """Affine lattice chart (s, t) -> origin + s*u + t*v of {a(x) = c}.

    ``unit`` is a lattice vector with a(unit) == 1; (unit, u, v) is a basis
    of Z^3, which certifies that (u, v) is a basis of the plane lattice.
    """

    form: LinearForm
    level: Rational
    origin: Point
    u: LatticePoint
    v: LatticePoint
    unit: LatticePoint

    def to_3d(self, s: Rational, t: Rational) -> Point:
        return self.origin + self.u * s + self.v * t

    def vector_to_3d(self, s: Rational, t: Rational) -> Point:
        return self.u * s + self.v * t

    def to_2d(self, p: Sequence[Rational]) -> Tuple[Fraction, Fraction]:
        _, s, t = solve3(self.unit, self.u, self.v, as_rational(p) - self.origin)
        return s, t

    def lattice_to_2d(self, p: LatticePoint) -> Tuple[int, int]:
        s, t = self.to_2d(p)
        return int(s), int(t)

    @property
    def basis_certificate(self) -> int:
        return columns_det(self.unit, self.u, self.v)


def plane_lattice_basis(a: LinearForm, c: Rational) -> PlaneChart:
    """Lattice chart of the plane {a(x) = c} for a primitive form a.

    The basis is oriented so that (u x v) . a > 0 (counterclockwise seen
    from the side where a increases).
    """
    if not a.is_primitive:
        raise PolycoverError("NotPrimitive", f"form {a.a!r} is not primitive")
    M = IntMatrix3.from_rows([tuple(a.a), (0, 0, 0), (0, 0, 0)])
    H, U = hnf(M)
    assert H.entry(0, 0) == 1, "primitive form must have row gcd 1"
    unit, u, v = U.columns
    if a(_cross(u, v)) < 0:
        u, v = v, u
    origin = unit * c if isinstance(c, int) else as_rational(unit) * Fraction(c)
    return PlaneChart(a, c, origin, u, v, unit)
