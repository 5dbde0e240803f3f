"""
Covers of centrally symmetric smooth 3-polytopes by lattice parallelepipeds
and unimodular simplices.

A point x != 0 of P leaves P through a facet F along the ray from 0:

* F not a unimodular triangle: the facet triangle T under the exit point
  extends to a unit square D in F, and x lies in conv(D, -D).
* F a unimodular triangle: the next lattice level F' of P is rF. If x lies
  in conv(F, F') it is in one of the unimodular simplices covering that
  Cayley polytope; otherwise its projection onto F' lies in a unit lozenge
  L of rF and x lies in conv(L, -L).

Both parallelepipeds and unimodular simplices have the integer decomposition
property, so a cover certificate turns into decompositions of every lattice
point of every dilate.
"""

import functools
import itertools
import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from polycover.analysis import (
    check_centrally_symmetric,
    check_smooth,
    decompose_in_parallelepiped,
    decompose_in_simplex,
    DecompositionWitness,
)
from polycover.errors import PolycoverError
from polycover.geometry import (
    cross2,
    polygon_contains,
    convex_hull3,
    EmbeddedPolygon,
    facet_polygon,
    fan_coarsens,
    is_lattice_polygon,
    normal_fan2,
    Parallelepiped,
    Point2,
    points_in_halfspaces,
    Polytope3,
    ray_exit,
    RationalPolygon,
    Simplex3,
    slice,
)
from polycover.lattice import (
    as_rational,
    LatticePoint,
    lattice_length,
    LinearForm,
    Point,
    primitive,
    Rational,
    RationalPoint,
    solve3,
    vector_sum,
)
from polycover.utils.measure_time import measure_time
from polycover.utils.parallel import parallel_map

logger = logging.getLogger(__name__)

Triangle2 = Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]


##########################################################################
###                           pieces and squares                       ###


@dataclass(frozen=True)
class UnitSquare:
    """Lattice parallelogram of area one (in the plane lattice)."""

    anchor: LatticePoint
    d1: LatticePoint
    d2: LatticePoint
    host_plane: Tuple[LinearForm, int]

    @property
    def corners(self) -> Tuple[LatticePoint, ...]:
        a = self.anchor
        return (a, a + self.d1, a + self.d2, a + self.d1 + self.d2)


class Provenance(str, Enum):
    SQUARE_EXTENSION = "SquareExtension"
    CAYLEY_PRISM = "CayleyPrism"
    PUSHED_FACET_LOZENGE = "PushedFacetLozenge"


@dataclass(frozen=True)
class CoverPiece:
    shape: Union[Simplex3, Parallelepiped]
    provenance: Provenance
    facet: int

    @property
    def is_simplex(self) -> bool:
        return isinstance(self.shape, Simplex3)

    @property
    def kind(self) -> str:
        return "simplex" if self.is_simplex else "box"

    @property
    def vertices(self) -> Tuple[LatticePoint, ...]:
        return tuple(sorted(self.shape.corners))

    @property
    def key(self) -> Tuple:
        return (self.kind, self.vertices)

    @property
    def is_valid(self) -> bool:
        if self.is_simplex:
            return self.shape.is_unimodular
        return not self.shape.is_degenerate

    def contains(self, x: Sequence[Rational]) -> bool:
        return self.shape.contains(x)

    def contains_in_dilate(self, p: Sequence[int], n: int) -> bool:
        return self.shape.contains_in_dilate(p, n)

    def negated(self) -> "CoverPiece":
        if self.is_simplex:
            shape = Simplex3(tuple(-v for v in self.shape.vertices))
        else:
            Q = self.shape
            shape = Parallelepiped(-(Q.anchor + Q.e1 + Q.e2 + Q.e3), Q.e1, Q.e2, Q.e3)
        return CoverPiece(shape, self.provenance, self.facet)


@dataclass
class CoveringCertificate:
    host: Polytope3
    pieces: List[CoverPiece] = field(default_factory=list)


##########################################################################
###                        smooth polygons (facets)                    ###


def _ccw(a, b, c) -> Triangle2:
    return (a, b, c) if cross2(a, b, c) > 0 else (a, c, b)


def full_triangulation2(F: EmbeddedPolygon) -> List[Triangle2]:
    """Placing triangulation of F using all of its lattice points.

    Points are inserted in lexicographic order; collinear boundary points are
    kept on the running hull so every triangle is empty, i.e. has area 1/2.
    """
    points = sorted(F.lattice_points2d())
    line = points[:2]
    k = 2
    while k < len(points) and cross2(line[0], line[-1], points[k]) == 0:
        line.append(points[k])
        k += 1
    if k >= len(points):
        raise PolycoverError("LowDimensional", "polygon has no interior")

    apex = points[k]
    triangles = [_ccw(a, b, apex) for a, b in zip(line, line[1:])]
    if cross2(line[0], line[-1], apex) > 0:
        hull = line + [apex]
    else:
        hull = list(reversed(line)) + [apex]

    for q in points[k + 1:]:
        m = len(hull)
        visible = [cross2(hull[i], hull[(i + 1) % m], q) < 0 for i in range(m)]
        start = next(i for i in range(m) if visible[i] and not visible[i - 1])
        rotated = hull[start:] + hull[:start]
        count = 0
        while count < m and visible[(start + count) % m]:
            a, b = rotated[count], rotated[count + 1]
            triangles.append((b, a, q))
            count += 1
        hull = [rotated[0], q] + rotated[count:]

    assert all(abs(cross2(*t)) == 1 for t in triangles)
    return triangles


Square2 = Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]  # anchor, d1, d2 in chart coordinates


def _sub2(a, b) -> Tuple[int, int]:
    return a[0] - b[0], a[1] - b[1]


def _square_coords(square: Square2, q: Point2) -> Tuple[Rational, Rational]:
    anchor, d1, d2 = square
    w = _sub2(q, anchor)
    det = d1[0] * d2[1] - d1[1] * d2[0]
    return (w[0] * d2[1] - w[1] * d2[0]) * det, (d1[0] * w[1] - d1[1] * w[0]) * det


def square_contains2(square: Square2, q: Point2) -> bool:
    s, t = _square_coords(square, q)
    return 0 <= s <= 1 and 0 <= t <= 1


def _completions(F: EmbeddedPolygon, T: Sequence[Tuple[int, int]]) -> List[Square2]:
    T = [tuple(t) for t in T]
    if len(F.vertices2d) == 3 and set(T) == set(F.vertices2d):
        raise PolycoverError("NotProperSubset", "triangle is the whole polygon")
    if abs(cross2(*T)) != 1:
        raise PolycoverError("NotUnimodular", f"triangle {T} does not have area 1/2")
    squares = []
    for i in range(3):
        ti, tj, tk = T[i], T[(i + 1) % 3], T[(i + 2) % 3]
        if F.contains2d((tj[0] + tk[0] - ti[0], tj[1] + tk[1] - ti[1])):
            squares.append((ti, _sub2(tj, ti), _sub2(tk, ti)))
    if not squares:
        raise PolycoverError(
            "SquareExtensionFailed",
            f"no completion of {T} lies in the polygon; the polygon is not smooth",
            witness=T,
        )
    return squares


def _lift_square(F: EmbeddedPolygon, square: Square2) -> UnitSquare:
    anchor, d1, d2 = square
    chart = F.chart
    return UnitSquare(
        anchor=chart.to_3d(*anchor),
        d1=chart.vector_to_3d(*d1),
        d2=chart.vector_to_3d(*d2),
        host_plane=F.plane,
    )


def extend_triangle_to_square(
    F: EmbeddedPolygon,
    T: Sequence[Tuple[int, int]],
    aligned_with: Sequence[Triangle2] = (),
) -> UnitSquare:
    """Parallelogram completion t_j + t_k - t_i of T that stays in F.

    A completion whose other half is a triangle of ``aligned_with`` wins;
    otherwise the first one in vertex order.
    """
    return _lift_square(F, _aligned_completion(F, T, {frozenset(t) for t in aligned_with}))


def _aligned_completion(F: EmbeddedPolygon, T: Sequence[Tuple[int, int]], faces) -> Square2:
    squares = _completions(F, T)
    for square in squares:
        anchor, d1, d2 = square
        tj, tk = (anchor[0] + d1[0], anchor[1] + d1[1]), (anchor[0] + d2[0], anchor[1] + d2[1])
        if frozenset((tj, tk, (tj[0] + d2[0], tj[1] + d2[1]))) in faces:
            return square
    return squares[0]


def _interiors_meet(P: Sequence[Point2], Q: Sequence[Point2]) -> bool:
    """Separating axis test for two convex polygons; touching does not count."""
    for poly in (P, Q):
        for k in range(len(poly)):
            (x0, y0), (x1, y1) = poly[k], poly[(k + 1) % len(poly)]
            nx, ny = y1 - y0, x0 - x1
            p = [nx * x + ny * y for x, y in P]
            q = [nx * x + ny * y for x, y in Q]
            if max(p) <= min(q) or max(q) <= min(p):
                return False
    return True


@dataclass(frozen=True)
class _CornerFrame:
    """Lattice coordinates along the two edges leaving a smooth vertex."""

    origin: Tuple[int, int]
    e1: Tuple[int, int]
    e2: Tuple[int, int]

    @classmethod
    def at_vertex(cls, F: EmbeddedPolygon, i: int) -> Optional["_CornerFrame"]:
        vs = F.vertices2d
        v = vs[i]
        e1, e2 = (_primitive2(_sub2(w, v)) for w in (vs[(i + 1) % len(vs)], vs[i - 1]))
        if abs(e1[0] * e2[1] - e1[1] * e2[0]) != 1:
            return None
        return cls(v, e1, e2)

    def coords(self, p: Tuple[int, int]) -> Tuple[int, int]:
        s, t = _square_coords((self.origin, self.e1, self.e2), p)
        return int(s), int(t)

    def cell(self, a: int, b: int) -> Square2:
        o, e1, e2 = self.origin, self.e1, self.e2
        return (o[0] + a * e1[0] + b * e2[0], o[1] + a * e1[1] + b * e2[1]), e1, e2


def _primitive2(d: Tuple[int, int]) -> Tuple[int, int]:
    g = math.gcd(d[0], d[1])
    return d[0] // g, d[1] // g


def _covered_by_cells(frame: _CornerFrame, full: set, T: Triangle2) -> bool:
    tt = [frame.coords(t) for t in T]
    xs, ys = [p[0] for p in tt], [p[1] for p in tt]
    for a in range(min(xs), max(xs)):
        for b in range(min(ys), max(ys)):
            if (a, b) in full:
                continue
            if _interiors_meet(tt, [(a, b), (a + 1, b), (a + 1, b + 1), (a, b + 1)]):
                return False
    return True


def _squares_from_frame(F: EmbeddedPolygon, triangles: List[Triangle2], frame: Optional[_CornerFrame]) -> List[Square2]:
    full: set = set()
    squares: List[Square2] = []
    if frame is not None:
        coords = {frame.coords(p) for p in F.lattice_points2d()}
        full = {(a, b) for a, b in coords if {(a + 1, b), (a, b + 1), (a + 1, b + 1)} <= coords}
        squares = [frame.cell(a, b) for a, b in sorted(full)]
    faces = {frozenset(t) for t in triangles}
    for T in triangles:
        if frame is not None and _covered_by_cells(frame, full, T):
            continue
        if any(all(square_contains2(s, t) for t in T) for s in squares):
            continue
        squares.append(_aligned_completion(F, T, faces))
    return squares


def square_cover2(F: EmbeddedPolygon, triangles: List[Triangle2]) -> List[Square2]:
    """Unit squares in F whose union is F.

    The lattice cells along the edges of a vertex that fit in F come first;
    triangles they leave uncovered are extended one by one. The vertex giving
    the fewest squares wins.
    """
    best: Optional[List[Square2]] = None
    for i in range(len(F.vertices2d)):
        frame = _CornerFrame.at_vertex(F, i)
        if frame is None:
            continue
        squares = _squares_from_frame(F, triangles, frame)
        if best is None or len(squares) < len(best):
            best = squares
    return best if best is not None else _squares_from_frame(F, triangles, None)


def square_cover(F: EmbeddedPolygon) -> List[UnitSquare]:
    return [_lift_square(F, s) for s in square_cover2(F, full_triangulation2(F))]


def square_to_cs_parallelepiped(D: UnitSquare) -> Parallelepiped:
    """conv(D, -D) for a unit square whose plane misses the origin."""
    normal = D.d1.cross(D.d2)
    if normal.dot(D.anchor) == 0:
        raise PolycoverError("DegeneratePiece", f"square at {D.anchor!r} spans a plane through 0")
    Q = Parallelepiped(-(D.anchor + D.d1 + D.d2), D.d1, D.d2, D.anchor * 2 + D.d1 + D.d2)
    expected = set(D.corners) | {-c for c in D.corners}
    assert set(Q.corners) == expected, "parallelepiped corners must be D and -D"
    return Q


##########################################################################
###                            pushed facets                           ###


@dataclass
class PushedFacet:
    # None when the next lattice level misses P.
    polygon: Optional[RationalPolygon]
    is_lattice: bool = False
    # None when F' is lower dimensional and has no fan.
    fan_coarsens: Optional[bool] = None

    @property
    def degenerate(self) -> bool:
        return self.polygon is None or self.polygon.dimension < 2


def push_facet(P: Polytope3, index: int) -> PushedFacet:
    """The slice F' = P ∩ {a(x) = c+1} one lattice step inside facet F."""
    facet = P.facets[index]
    try:
        # Charted with the outward form, like the facet itself.
        polygon = slice(P, facet.outward, -(facet.offset + 1))
    except PolycoverError as e:
        if e.code != "EmptySlice":
            raise
        logger.info("facet %d: lattice width 1 in its normal direction", index)
        return PushedFacet(None)

    pushed = PushedFacet(polygon, is_lattice_polygon(polygon))
    if polygon.dimension == 2:
        pushed.fan_coarsens = fan_coarsens(normal_fan2(polygon), normal_fan2(facet_polygon(P, index)))
    if not pushed.is_lattice or pushed.fan_coarsens is False:
        logger.warning(
            "facet %d: pushed facet lattice=%s fan coarsens=%s",
            index, pushed.is_lattice, pushed.fan_coarsens,
        )
    return pushed


def is_unimodular_triangle_facet(P: Polytope3, index: int) -> bool:
    return facet_polygon(P, index).is_unimodular_triangle


class DilationRatio(NamedTuple):
    r: int
    translation: LatticePoint
    # F' vertices matched to the facet cycle: F'[i] = r * F[i] + translation.
    image: Tuple[LatticePoint, LatticePoint, LatticePoint]


def _match_dilate(f: List[LatticePoint], g: List[LatticePoint]) -> Optional[DilationRatio]:
    if len(g) == 1:
        return DilationRatio(0, g[0], (g[0], g[0], g[0]))
    if len(g) != 3:
        return None
    e1, e2 = f[1] - f[0], f[2] - f[0]
    # A positive dilate keeps the orientation, so only rotations of the cycle can match.
    for s in range(3):
        g0, g1, g2 = g[s], g[(s + 1) % 3], g[(s + 2) % 3]
        r = lattice_length(g1 - g0)
        if r > 0 and g1 - g0 == e1 * r and g2 - g0 == e2 * r:
            return DilationRatio(r, g0 - f[0] * r, (g0, g1, g2))
    return None


def facet_dilation_ratio(P: Polytope3, index: int) -> DilationRatio:
    if not is_unimodular_triangle_facet(P, index):
        raise PolycoverError("NotUnimodular", f"facet {index} is not a unimodular triangle")
    pushed = push_facet(P, index)
    if pushed.polygon is None or not pushed.is_lattice:
        raise PolycoverError("NotHomothetic", f"facet {index}: next level is not a lattice polygon")
    g = [v.to_lattice() for v in pushed.polygon.vertices]
    ratio = _match_dilate(P.facet_points(index), g)
    if ratio is None:
        raise PolycoverError(
            "NotHomothetic", f"facet {index}: next level {g} is not a dilate of the facet"
        )
    if ratio.r < 2 and check_centrally_symmetric(P).origin_centered:
        raise PolycoverError(
            "RatioTooSmall", f"facet {index}: r = {ratio.r} but P = -P forces r >= 2"
        )
    return ratio


##########################################################################
###                            Cayley covers                           ###


class CayleyGrid:
    """conv(F, F') for a unimodular triangle F and F' = rF + t one lattice
    step away, with F' cut into r^2 translates of F and -F."""

    def __init__(self, F: Sequence[Sequence[int]], Fp: Sequence[Sequence[int]], r: int):
        if r < 1:
            raise PolycoverError("BadCayleyInput", f"ratio must be >= 1, got {r}")
        f = [LatticePoint(*p) for p in F]
        e1, e2 = f[1] - f[0], f[2] - f[0]
        cross = e1.cross(e2)
        if cross.is_zero() or lattice_length(cross) != 1:
            raise PolycoverError("BadCayleyInput", f"{f} is not a unimodular triangle")
        g = self._match(f, [LatticePoint(*p) for p in Fp], r)
        normal = cross if cross.dot(g[0] - f[0]) > 0 else -cross
        if normal.dot(g[0] - f[0]) != 1:
            raise PolycoverError("BadCayleyInput", "triangles are not at lattice distance 1")
        self.f, self.g, self.r = tuple(f), tuple(g), r
        self.e1, self.e2 = e1, e2
        self.normal = normal
        self.level = normal.dot(f[0])
        self.translation = g[0] - f[0] * r

    @staticmethod
    def _match(f, g, r):
        e1, e2 = f[1] - f[0], f[2] - f[0]
        for order in itertools.permutations(g):
            if order[1] - order[0] == e1 * r and order[2] - order[0] == e2 * r:
                return list(order)
        raise PolycoverError("BadCayleyInput", f"{g} is not {r} times {f} up to translation")

    def grid_point(self, i: int, j: int) -> LatticePoint:
        return self.g[0] + self.e1 * i + self.e2 * j

    def small_triangles(self) -> Iterator[Tuple[bool, Tuple[int, int], Tuple[LatticePoint, ...]]]:
        """(upward, cell, labels R0 R1 R2) for every small triangle of F'."""
        r = self.r
        for i in range(r):
            for j in range(r - i):
                yield True, (i, j), (self.grid_point(i, j), self.grid_point(i + 1, j), self.grid_point(i, j + 1))
        for i in range(r - 1):
            for j in range(r - 1 - i):
                s = self.grid_point(i + 1, j + 1)
                yield False, (i, j), (s, s - self.e1, s - self.e2)

    def prism_simplices(self, upward: bool, R: Sequence[LatticePoint]) -> List[Simplex3]:
        A0, A1, A2 = self.f
        B0, B1, B2 = R
        if upward:
            # Staircase split of the prism over matched labels.
            quads = [(A0, A1, A2, B2), (A0, A1, B1, B2), (A0, B0, B1, B2)]
        else:
            # Antiprism: four simplices around the diagonal A0 B0.
            quads = [(A0, B0, A1, A2), (A0, B0, A2, B1), (A0, B0, B1, B2), (A0, B0, B2, A1)]
        simplices = [Simplex3(q) for q in quads]
        for S in simplices:
            if not S.is_unimodular:
                raise PolycoverError(
                    "NotUnimodular", f"Cayley simplex {S.vertices} has volume {S.normalized_volume}"
                )
        return simplices

    def simplices(self) -> List[Simplex3]:
        result = []
        for upward, _, R in self.small_triangles():
            result.extend(self.prism_simplices(upward, R))
        return result

    @functools.cached_property
    def hull(self) -> Polytope3:
        return convex_hull3(self.f + self.g)

    def contains(self, x: Sequence[Rational]) -> bool:
        return self.hull.contains(x)

    def grid_coordinates(self, x: Sequence[Rational]) -> Tuple[Fraction, Fraction, Fraction]:
        """(alpha, beta, height) with x = g0 + alpha e1 + beta e2 + height n."""
        return solve3(self.e1, self.e2, self.normal, as_rational(x) - self.g[0])

    def project(self, x: Sequence[Rational]) -> RationalPoint:
        """Image of x in the F' plane, projected from the center of similarity
        (along the translation when r = 1)."""
        x = as_rational(x)
        height = self.normal.dot(x) - self.level
        if self.r == 1:
            return x + self.translation * (1 - height)
        center = as_rational(self.translation) / (1 - self.r)
        lam = (self.level + 1 - self.normal.dot(center)) / (self.normal.dot(x) - self.normal.dot(center))
        return center + (x - center) * lam

    def locate(self, x: Sequence[Rational]) -> Simplex3:
        x = as_rational(x)
        alpha, beta, height = self.grid_coordinates(self.project(x))
        assert height == 0
        if alpha < 0 or beta < 0 or alpha + beta > self.r:
            raise PolycoverError("OutsidePolygon", f"{x!r} is not in the Cayley polytope")
        for upward, _, R in self.small_triangles():
            cell = [self.grid_coordinates(p)[:2] for p in R]
            if not polygon_contains(cell, (alpha, beta)):
                continue
            for S in self.prism_simplices(upward, R):
                if S.contains(x):
                    return S
        raise PolycoverError("CoverFailed", f"no Cayley simplex contains {x!r}")


def cayley_cover(F: Sequence[Sequence[int]], Fp: Sequence[Sequence[int]], r: int, facet: int = -1) -> List[CoverPiece]:
    grid = CayleyGrid(F, Fp, r)
    return [CoverPiece(S, Provenance.CAYLEY_PRISM, facet) for S in grid.simplices()]


def locate_cayley_simplex(F: Sequence[Sequence[int]], Fp: Sequence[Sequence[int]], r: int, x: Sequence[Rational]) -> Simplex3:
    return CayleyGrid(F, Fp, r).locate(x)


def cayley_polytope(r: int) -> Polytope3:
    """conv((Δ, 1), (rΔ, 0)) for the standard triangle Δ."""
    if r < 0:
        raise PolycoverError("InvalidParameter", f"ratio must be >= 0, got {r}")
    top = [(0, 0, 1), (1, 0, 1), (0, 1, 1)]
    bottom = [(0, 0, 0), (r, 0, 0), (0, r, 0)]
    return convex_hull3(top + bottom)


##########################################################################
###                               lozenges                             ###


# (d1, d2) in triangle coordinates, with the anchor range making the
# lozenge fit into rΔ, in selection priority.
_LOZENGE_TYPES = (
    ((1, 0), (0, 1)),
    ((1, 0), (-1, 1)),
    ((0, 1), (1, -1)),
)


def _lozenge_fits(kind: int, i: int, j: int, r: int) -> bool:
    if kind == 0:
        return i >= 0 and j >= 0 and i + j + 2 <= r
    if kind == 1:
        return i >= 1 and j >= 0 and i + j + 1 <= r
    return i >= 0 and j >= 1 and i + j + 1 <= r


def lozenge_containing(Fp: Sequence[Sequence[int]], r: int, x: Sequence[Rational]) -> UnitSquare:
    """A unit lozenge of the triangulated triangle Fp = rΔ containing x.

    Fp is given as its three vertices g0, g1, g2; the triangle coordinates of
    x are (alpha, beta) with x = g0 + alpha (g1-g0)/r + beta (g2-g0)/r.
    """
    if r <= 1:
        raise PolycoverError("RatioTooSmall", f"lozenges need r >= 2, got {r}")
    g0, g1, g2 = (LatticePoint(*p) for p in Fp)
    e1, e2 = _divide(g1 - g0, r), _divide(g2 - g0, r)
    normal = primitive(e1.cross(e2))
    alpha, beta, height = solve3(e1, e2, normal, as_rational(x) - g0)
    if height != 0 or alpha < 0 or beta < 0 or alpha + beta > r:
        raise PolycoverError("OutsidePolygon", f"{tuple(x)} is not in the triangle")

    for kind, ((a1, b1), (a2, b2)) in enumerate(_LOZENGE_TYPES):
        for i in range(r + 1):
            for j in range(r + 1):
                if not _lozenge_fits(kind, i, j, r):
                    continue
                s, t = _solve2((a1, b1), (a2, b2), (alpha - i, beta - j))
                if 0 <= s <= 1 and 0 <= t <= 1:
                    return UnitSquare(
                        anchor=g0 + e1 * i + e2 * j,
                        d1=e1 * a1 + e2 * b1,
                        d2=e1 * a2 + e2 * b2,
                        host_plane=(LinearForm(normal), normal.dot(g0)),
                    )
    raise PolycoverError("CoverFailed", f"no lozenge contains {tuple(x)}")


def _divide(v: LatticePoint, r: int) -> LatticePoint:
    if any(c % r for c in v):
        raise PolycoverError("BadCayleyInput", f"{v!r} is not divisible by {r}")
    return LatticePoint(v.x // r, v.y // r, v.z // r)


def _solve2(d1, d2, w) -> Tuple[Fraction, Fraction]:
    det = d1[0] * d2[1] - d1[1] * d2[0]
    s = Fraction(w[0] * d2[1] - w[1] * d2[0], det)
    t = Fraction(d1[0] * w[1] - d1[1] * w[0], det)
    return s, t


##########################################################################
###                         covering a polytope                        ###


class PolytopeCoverer:
    """Cover construction for one centrally symmetric smooth polytope.

    Only the facet of each antipodal pair {F, -F} with the smaller index is
    worked on: boxes conv(D, -D) serve both facets, and the Cayley simplices
    of -F are the negated simplices of F. Square covers and Cayley grids are
    computed once per facet.
    """

    def __init__(self, P: Polytope3):
        smooth = check_smooth(P)
        if not smooth.is_smooth:
            raise PolycoverError(
                "NotCoverable",
                f"polytope is not smooth at {[o.vertex for o in smooth.offending_vertices]}",
            )
        if not check_centrally_symmetric(P).origin_centered:
            raise PolycoverError("NotCoverable", "polytope is not symmetric about the origin")
        self.P = P
        self._squares: Dict[int, Tuple[EmbeddedPolygon, List[Square2]]] = {}
        self._grids: Dict[int, Optional[CayleyGrid]] = {}

    def antipode(self, index: int) -> int:
        facet = self.P.facets[index]
        partner = self.P.facet_of_form(-facet.normal, facet.offset)
        assert partner is not None, "centrally symmetric polytopes have antipodal facets"
        return partner

    def representatives(self) -> List[int]:
        return [k for k in range(len(self.P.facets)) if k < self.antipode(k)]

    def squares(self, index: int) -> Tuple[EmbeddedPolygon, List[Square2]]:
        if index not in self._squares:
            F = facet_polygon(self.P, index)
            self._squares[index] = (F, square_cover2(F, full_triangulation2(F)))
        return self._squares[index]

    def cayley_grid(self, index: int) -> Optional[CayleyGrid]:
        """Cayley grid of a unimodular triangle facet, None for other facets."""
        if index not in self._grids:
            grid = None
            if is_unimodular_triangle_facet(self.P, index):
                ratio = facet_dilation_ratio(self.P, index)
                grid = CayleyGrid(self.P.facet_points(index), ratio.image, ratio.r)
            self._grids[index] = grid
        return self._grids[index]

    def _square_box(self, index: int, square: Square2) -> CoverPiece:
        F, _ = self.squares(index)
        D = _lift_square(F, square)
        return CoverPiece(square_to_cs_parallelepiped(D), Provenance.SQUARE_EXTENSION, index)

    def _lozenge_box(self, index: int, grid: CayleyGrid, x: Sequence[Rational]) -> CoverPiece:
        L = lozenge_containing(grid.g, grid.r, x)
        return CoverPiece(square_to_cs_parallelepiped(L), Provenance.PUSHED_FACET_LOZENGE, index)

    def cover_point(self, x: Sequence[Rational]) -> CoverPiece:
        x = as_rational(x)
        if not self.P.contains(x):
            raise PolycoverError("OutsidePolytope", f"{x!r} is not in P")
        if x.is_zero():
            piece = self.facet_pieces(self._first_box_facet())[-1]
        else:
            piece = self._cover_nonzero(x)
        if not piece.contains(x) or not all(self.P.contains(v) for v in piece.vertices):
            raise PolycoverError("CoverFailed", f"piece {piece.vertices} does not cover {x!r} inside P")
        return piece

    def _first_box_facet(self) -> int:
        for index in range(len(self.P.facets)):
            if self.cayley_grid(index) is None:
                return index
        return 0

    def _cover_nonzero(self, x: RationalPoint) -> CoverPiece:
        hit = ray_exit(self.P, x)
        index = min(hit.facets)
        partner = self.antipode(index)
        if partner < index:
            return self._cover_on_facet(partner, -x, -hit.point).negated()
        return self._cover_on_facet(index, x, hit.point)

    def _cover_on_facet(self, index: int, x: RationalPoint, exit_point: Point) -> CoverPiece:
        grid = self.cayley_grid(index)
        if grid is None:
            F, squares = self.squares(index)
            q = F.chart.to_2d(exit_point)
            square = next((s for s in squares if square_contains2(s, q)), None)
            if square is None:
                raise PolycoverError("CoverFailed", f"no square of facet {index} contains {q}")
            return self._square_box(index, square)

        if grid.contains(x):
            return CoverPiece(grid.locate(x), Provenance.CAYLEY_PRISM, index)
        facet = self.P.facets[index]
        projected = x * (Fraction(facet.offset + 1) / facet.normal(x))
        return self._lozenge_box(index, grid, projected)

    def facet_pieces(self, index: int) -> List[CoverPiece]:
        grid = self.cayley_grid(index)
        if grid is None:
            _, squares = self.squares(index)
            return [self._square_box(index, s) for s in squares]

        pieces = [CoverPiece(S, Provenance.CAYLEY_PRISM, index) for S in grid.simplices()]
        for _, _, R in grid.small_triangles():
            centroid = as_rational(R[0] + R[1] + R[2]) / 3
            pieces.append(self._lozenge_box(index, grid, centroid))
        return pieces

    def _pair_pieces(self, index: int) -> List[CoverPiece]:
        pieces = self.facet_pieces(index)
        return pieces + [p.negated() for p in pieces if p.is_simplex]

    def cover_polytope(self) -> CoveringCertificate:
        with measure_time("cover construction: {time:.3f} seconds"):
            per_pair = parallel_map(self._pair_pieces, self.representatives())
        pieces: Dict[Tuple, CoverPiece] = {}
        for piece in itertools.chain.from_iterable(per_pair):
            pieces.setdefault(piece.key, piece)
        cert = CoveringCertificate(self.P, list(pieces.values()))
        report = verify_cover(cert, 1)
        if not report.passed:
            raise PolycoverError("CoverFailed", report.summary(), witness=report.failures[0])
        logger.info(
            "certificate: %d pieces (%d simplices, %d boxes)",
            len(cert.pieces),
            sum(p.is_simplex for p in cert.pieces),
            sum(not p.is_simplex for p in cert.pieces),
        )
        return cert


@functools.lru_cache(maxsize=8)
def _coverer(P: Polytope3) -> PolytopeCoverer:
    return PolytopeCoverer(P)


def cover_point(P: Polytope3, x: Sequence[Rational]) -> CoverPiece:
    return _coverer(P).cover_point(x)


def cover_polytope(P: Polytope3) -> CoveringCertificate:
    return _coverer(P).cover_polytope()


##########################################################################
###                            verification                            ###


class CoverFailure(NamedTuple):
    check: str  # "containment", "lattice", "grid" or "piece"
    location: Union[Point, int]
    detail: str = ""


@dataclass
class CoverReport:
    grid_denominator: int
    pieces: int
    lattice_points: int = 0
    grid_points: int = 0
    failures: List[CoverFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        if self.passed:
            return (
                f"cover verified: {self.pieces} pieces, {self.lattice_points} lattice points, "
                f"{self.grid_points} points of the 1/{self.grid_denominator} grid"
            )
        counts: Dict[str, int] = {}
        for failure in self.failures:
            counts[failure.check] = counts.get(failure.check, 0) + 1
        first = self.failures[0]
        return f"cover check failed: {counts}; first {first.check} failure at {first.location!r}"


def _uncovered(points: List[Tuple[int, int, int]], pieces: List[CoverPiece], scale: int) -> np.ndarray:
    if not points:
        return np.zeros(0, dtype=bool)
    masks = parallel_map(lambda piece: points_in_halfspaces(points, piece.shape.halfspaces, scale), pieces)
    covered = np.zeros(len(points), dtype=bool)
    for mask in masks:
        covered |= mask
    return ~covered


def verify_cover(cert: CoveringCertificate, grid_denominator: int) -> CoverReport:
    if grid_denominator < 1:
        raise PolycoverError("InvalidParameter", f"grid denominator must be >= 1, got {grid_denominator}")
    host = cert.host
    report = CoverReport(grid_denominator, len(cert.pieces))

    usable = []
    for k, piece in enumerate(cert.pieces):
        for v in piece.vertices:
            if not host.contains(v):
                report.failures.append(CoverFailure("containment", v, f"vertex of piece {k}"))
        if piece.is_valid:
            usable.append(piece)
        else:
            report.failures.append(CoverFailure("piece", k, f"invalid {piece.kind}"))

    with measure_time("cover verification: {time:.3f} seconds", level=logging.DEBUG):
        lattice = [tuple(p) for p in host.lattice_points()]
        report.lattice_points = len(lattice)
        for p, missed in zip(lattice, _uncovered(lattice, usable, 1)):
            if missed:
                report.failures.append(CoverFailure("lattice", LatticePoint(*p)))

        if grid_denominator > 1:
            grid = [tuple(q) for q in host.scaled(grid_denominator).lattice_points()]
            report.grid_points = len(grid)
            for q, missed in zip(grid, _uncovered(grid, usable, grid_denominator)):
                if missed:
                    report.failures.append(CoverFailure("grid", as_rational(q) / grid_denominator))
        else:
            report.grid_points = report.lattice_points

    logger.debug(report.summary())
    return report


##########################################################################
###                            decomposition                           ###


def decompose_via_cover(P: Polytope3, cert: CoveringCertificate, p: Sequence[int], n: int) -> DecompositionWitness:
    p = LatticePoint(*p)
    if n < 1:
        raise PolycoverError("InvalidParameter", f"dilation factor must be >= 1, got {n}")
    if not P.contains_in_dilate(p, n):
        raise PolycoverError("OutsideDilate", f"{p!r} is not in {n}P")
    piece = next((q for q in cert.pieces if q.contains_in_dilate(p, n)), None)
    if piece is None:
        piece = cover_point(P, as_rational(p) / n)

    if piece.is_simplex:
        witness = decompose_in_simplex(piece.shape, p, n)
    else:
        witness = decompose_in_parallelepiped(piece.shape, p, n)
    if vector_sum(witness.parts) != p or not all(P.contains(q) for q in witness.parts):
        raise PolycoverError("CoverFailed", f"decomposition of {p!r} left P")
    return witness


def slab_identity_holds(P: Polytope3, index: int, grid_denominator: int = 4) -> bool:
    """Grid check of P ∩ {c <= a(x) <= c+1} = conv(F, F') for facet (a, c)."""
    facet = P.facets[index]
    pushed = push_facet(P, index)
    if pushed.polygon is None:
        return False
    top = pushed.polygon.vertices
    scale = 1
    for v in top:
        for coordinate in v:
            scale = math.lcm(scale, coordinate.denominator)
    layer = convex_hull3(
        [v * scale for v in P.facet_points(index)] + [(v * scale).to_lattice() for v in top]
    )

    N = grid_denominator
    grid = [tuple(q) for q in P.scaled(N).lattice_points()]
    in_slab = [q for q in grid if N * facet.offset <= facet.normal(q) <= N * (facet.offset + 1)]
    if not in_slab:
        return True
    in_layer = points_in_halfspaces([tuple(c * scale for c in q) for q in in_slab], layer.halfspaces, N)
    return bool(np.all(in_layer))
