# Exact 3-dimensional lattice polytopes.
#
# Vertex and facet descriptions are kept together: facets carry primitive
# inward normals a with integer offsets c (a(x) >= c on the polytope) and a
# counterclockwise vertex cycle as seen from outside.

from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from polycover.errors import PolycoverError
from polycover.lattice import (
    as_rational,
    columns_det,
    LatticePoint,
    lattice_length,
    LinearForm,
    plane_lattice_basis,
    PlaneChart,
    Point,
    primitive,
    Rational,
    RationalPoint,
    solve3,
)

logger = logging.getLogger(__name__)

Point2 = Tuple[Rational, Rational]
Halfspace = Tuple[LatticePoint, int]


##########################################################################
###                      exact vectorized predicates                   ###


def _exact_dtype(max_coord: int, max_coeff: int):
    # int64 is exact as long as no dot product can leave its range;
    # otherwise fall back to Python ints in object arrays.
    if 3 * max(max_coord, 1) * max(max_coeff, 1) < 2**62:
        return np.int64
    return object


def points_in_halfspaces(
    points: Sequence[Sequence[int]], halfspaces: Sequence[Halfspace], scale: int = 1
) -> np.ndarray:
    """Boolean mask of the integer points q with normal.q >= scale*offset
    for every halfspace. With scale = N this tests the points q/N."""
    if not points:
        return np.zeros(0, dtype=bool)
    max_coord = max(abs(c) for p in points for c in p)
    max_coeff = max((abs(c) for n, _ in halfspaces for c in n), default=1)
    dtype = _exact_dtype(max(max_coord, scale), max_coeff)
    grid = np.array(points, dtype=dtype)
    normals = np.array([n for n, _ in halfspaces], dtype=dtype).reshape(-1, 3)
    offsets = np.array([scale * c for _, c in halfspaces], dtype=object)
    values = grid.dot(normals.T)
    return np.all(values >= offsets, axis=1).astype(bool)


def _box_points(corners: Iterable[Sequence[Rational]], scale: int = 1) -> List[Tuple[int, int, int]]:
    corners = list(corners)
    lo = [min(math.floor(scale * p[i]) for p in corners) for i in range(3)]
    hi = [max(math.ceil(scale * p[i]) for p in corners) for i in range(3)]
    return list(itertools.product(*(range(lo[i], hi[i] + 1) for i in range(3))))


##########################################################################
###                        halfspace-described shapes                  ###


class _HalfspaceShape:
    """Membership and lattice-point enumeration for shapes exposing
    ``halfspaces`` (inward integer normals) and ``corners``."""

    halfspaces: Tuple[Halfspace, ...]
    corners: Tuple[LatticePoint, ...]

    def contains(self, x: Sequence[Rational]) -> bool:
        return all(normal.dot(x) >= offset for normal, offset in self.halfspaces)

    def contains_in_dilate(self, p: Sequence[Rational], n: int) -> bool:
        """Whether p lies in n times the shape."""
        return all(normal.dot(p) >= n * offset for normal, offset in self.halfspaces)

    def lattice_points(self) -> List[LatticePoint]:
        candidates = _box_points(self.corners)
        mask = points_in_halfspaces(candidates, self.halfspaces)
        return [LatticePoint(*p) for p, keep in zip(candidates, mask) if keep]


@dataclass(frozen=True)
class Simplex3(_HalfspaceShape):
    vertices: Tuple[LatticePoint, LatticePoint, LatticePoint, LatticePoint]

    @property
    def corners(self) -> Tuple[LatticePoint, ...]:
        return self.vertices

    @cached_property
    def determinant(self) -> int:
        v0, v1, v2, v3 = self.vertices
        return columns_det(v1 - v0, v2 - v0, v3 - v0)

    @property
    def normalized_volume(self) -> int:
        return abs(self.determinant)

    @property
    def is_unimodular(self) -> bool:
        return self.normalized_volume == 1

    @cached_property
    def halfspaces(self) -> Tuple[Halfspace, ...]:
        if self.determinant == 0:
            raise PolycoverError("DegeneratePiece", f"simplex {self.vertices} is flat")
        result = []
        for i in range(4):
            a, b, c = (self.vertices[j] for j in range(4) if j != i)
            normal = (b - a).cross(c - a)
            if normal.dot(self.vertices[i] - a) < 0:
                normal = -normal
            result.append((normal, normal.dot(a)))
        return tuple(result)


@dataclass(frozen=True)
class Parallelepiped(_HalfspaceShape):
    anchor: LatticePoint
    e1: LatticePoint
    e2: LatticePoint
    e3: LatticePoint

    @property
    def edges(self) -> Tuple[LatticePoint, LatticePoint, LatticePoint]:
        return (self.e1, self.e2, self.e3)

    @cached_property
    def determinant(self) -> int:
        return columns_det(self.e1, self.e2, self.e3)

    @property
    def is_degenerate(self) -> bool:
        return self.determinant == 0

    @cached_property
    def corners(self) -> Tuple[LatticePoint, ...]:
        return tuple(
            sorted(
                self.anchor + self.e1 * i + self.e2 * j + self.e3 * k
                for i, j, k in itertools.product((0, 1), repeat=3)
            )
        )

    @cached_property
    def halfspaces(self) -> Tuple[Halfspace, ...]:
        if self.is_degenerate:
            raise PolycoverError("DegeneratePiece", f"edges {self.edges} are linearly dependent")
        result = []
        for i in range(3):
            e, f, g = self.edges[i], self.edges[(i + 1) % 3], self.edges[(i + 2) % 3]
            normal = f.cross(g)
            if normal.dot(e) < 0:
                normal = -normal
            result.append((normal, normal.dot(self.anchor)))
            result.append((-normal, -normal.dot(self.anchor + e)))
        return tuple(result)

    def coordinates(self, x: Sequence[Rational]) -> Tuple[Fraction, Fraction, Fraction]:
        return solve3(self.e1, self.e2, self.e3, as_rational(x) - self.anchor)


##########################################################################
###                              polytopes                             ###


@dataclass(frozen=True)
class Facet:
    normal: LinearForm  # primitive, pointing into the polytope
    offset: int
    vertices: Tuple[int, ...]  # counterclockwise seen from outside

    @property
    def outward(self) -> LinearForm:
        return -self.normal


@dataclass(frozen=True)
class Edge:
    ends: Tuple[int, int]
    facets: Tuple[int, int]


@dataclass(frozen=True)
class Polytope3(_HalfspaceShape):
    vertices: Tuple[LatticePoint, ...]
    facets: Tuple[Facet, ...]
    edges: Tuple[Edge, ...]

    @property
    def corners(self) -> Tuple[LatticePoint, ...]:
        return self.vertices

    @cached_property
    def halfspaces(self) -> Tuple[Halfspace, ...]:
        return tuple((f.normal.a, f.offset) for f in self.facets)

    @cached_property
    def _incident_edges(self) -> Dict[int, List[int]]:
        incident: Dict[int, List[int]] = {i: [] for i in range(len(self.vertices))}
        for k, edge in enumerate(self.edges):
            for end in edge.ends:
                incident[end].append(k)
        return incident

    def vertex_index(self, p: Sequence[Rational]) -> int:
        try:
            return self.vertices.index(tuple(p))
        except ValueError:
            raise PolycoverError("NotAVertex", f"{tuple(p)} is not a vertex") from None

    def neighbors(self, i: int) -> List[int]:
        result = []
        for k in self._incident_edges[i]:
            a, b = self.edges[k].ends
            result.append(b if a == i else a)
        return sorted(result)

    def degree(self, i: int) -> int:
        return len(self._incident_edges[i])

    def edge_vectors(self, i: int) -> List[LatticePoint]:
        return [self.vertices[j] - self.vertices[i] for j in self.neighbors(i)]

    def edge_directions(self, i: int) -> List[LatticePoint]:
        """Primitive edge directions at vertex i, ordered by neighbor index."""
        return [primitive(d) for d in self.edge_vectors(i)]

    def edge_lengths(self, i: int) -> List[int]:
        return [lattice_length(d) for d in self.edge_vectors(i)]

    def facet_chart(self, index: int) -> PlaneChart:
        """Lattice chart of a facet plane, counterclockwise from outside."""
        facet = self.facets[index]
        return plane_lattice_basis(facet.outward, -facet.offset)

    def facet_points(self, index: int) -> List[LatticePoint]:
        return [self.vertices[i] for i in self.facets[index].vertices]

    def facet_of_form(self, normal: LinearForm, offset: int) -> Optional[int]:
        for k, facet in enumerate(self.facets):
            if facet.normal == normal and facet.offset == offset:
                return k
        return None

    def scaled(self, k: int) -> "Polytope3":
        if k < 1:
            raise PolycoverError("InvalidParameter", f"dilation factor must be >= 1, got {k}")
        return Polytope3(
            vertices=tuple(v * k for v in self.vertices),
            facets=tuple(Facet(f.normal, f.offset * k, f.vertices) for f in self.facets),
            edges=self.edges,
        )

    def negated(self) -> "Polytope3":
        return convex_hull3([-v for v in self.vertices])

    def translated(self, t: LatticePoint) -> "Polytope3":
        return convex_hull3([v + t for v in self.vertices])

    @cached_property
    def normalized_volume(self) -> int:
        """3! times the Euclidean volume: cone from vertex 0 over a fan
        triangulation of every facet not containing it."""
        apex = self.vertices[0]
        total = 0
        for facet in self.facets:
            if 0 in facet.vertices:
                continue
            cycle = [self.vertices[i] for i in facet.vertices]
            for b, c in zip(cycle[1:], cycle[2:]):
                total += abs(columns_det(cycle[0] - apex, b - apex, c - apex))
        return total

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.facets)


def _orient(a: LatticePoint, b: LatticePoint, c: LatticePoint, d: LatticePoint) -> int:
    return columns_det(b - a, c - a, d - a)


def _initial_simplex(pts: List[LatticePoint]) -> Tuple[int, int, int, int]:
    p0 = pts[0]
    i1 = next((i for i, p in enumerate(pts) if p != p0), None)
    if i1 is None:
        raise PolycoverError("DegenerateInput", "affine hull has dimension 0", witness=0)
    d1 = pts[i1] - p0
    i2 = next((i for i, p in enumerate(pts) if not d1.cross(p - p0).is_zero()), None)
    if i2 is None:
        raise PolycoverError("DegenerateInput", "affine hull has dimension 1", witness=1)
    i3 = next((i for i, p in enumerate(pts) if _orient(p0, pts[i1], pts[i2], p) != 0), None)
    if i3 is None:
        raise PolycoverError("DegenerateInput", "affine hull has dimension 2", witness=2)
    return 0, i1, i2, i3


def _incremental_hull(pts: List[LatticePoint], base: Tuple[int, int, int, int]) -> List[Tuple[int, int, int]]:
    # Faces are triangles (a, b, c) whose normal (b-a)x(c-a) points outward.
    faces = set()
    for omit in range(4):
        a, b, c = (base[j] for j in range(4) if j != omit)
        if _orient(pts[a], pts[b], pts[c], pts[base[omit]]) > 0:
            a, b = b, a
        faces.add((a, b, c))

    in_base = set(base)
    for idx, p in enumerate(pts):
        if idx in in_base:
            continue
        visible = [f for f in faces if _orient(pts[f[0]], pts[f[1]], pts[f[2]], p) > 0]
        if not visible:
            continue
        directed = set()
        for a, b, c in visible:
            directed.update(((a, b), (b, c), (c, a)))
        horizon = [(a, b) for a, b in directed if (b, a) not in directed]
        faces.difference_update(visible)
        faces.update((a, b, idx) for a, b in horizon)
    return sorted(faces)


def convex_hull2(points: Iterable[Point2]) -> List[Point2]:
    """Strictly convex corners in counterclockwise order starting at the
    lexicographic minimum (monotone chain). Collinear inputs give the two
    extreme points, a single point gives itself."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        chain: List[Point2] = []
        for p in seq:
            while len(chain) >= 2 and cross2(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) > 1 else pts[:1]


def cross2(o: Point2, a: Point2, b: Point2) -> Rational:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _assemble(pts: List[LatticePoint], triangles: List[Tuple[int, int, int]]) -> Polytope3:
    groups: Dict[LatticePoint, set] = {}
    for a, b, c in triangles:
        outward = primitive((pts[b] - pts[a]).cross(pts[c] - pts[a]))
        groups.setdefault(outward, set()).update((pts[a], pts[b], pts[c]))

    facet_cycles = []
    for outward, members in groups.items():
        form = LinearForm(outward)
        chart = plane_lattice_basis(form, form(next(iter(members))))
        to_3d = {chart.lattice_to_2d(p): p for p in members}
        corners = [to_3d[q] for q in convex_hull2(to_3d)]
        facet_cycles.append((-form, -chart.level, corners))

    vertices = tuple(sorted({p for _, _, corners in facet_cycles for p in corners}))
    index = {p: i for i, p in enumerate(vertices)}
    facet_cycles.sort(key=lambda item: (tuple(item[0].a), item[1]))

    facets = []
    for normal, offset, corners in facet_cycles:
        cycle = [index[p] for p in corners]
        start = cycle.index(min(cycle))
        facets.append(Facet(normal, offset, tuple(cycle[start:] + cycle[:start])))

    edge_facets: Dict[Tuple[int, int], List[int]] = {}
    for k, facet in enumerate(facets):
        cycle = facet.vertices
        for i in range(len(cycle)):
            key = tuple(sorted((cycle[i], cycle[(i + 1) % len(cycle)])))
            edge_facets.setdefault(key, []).append(k)
    edges = []
    for key in sorted(edge_facets):
        owners = edge_facets[key]
        assert len(owners) == 2, f"edge {key} lies in {len(owners)} facets"
        edges.append(Edge(key, (owners[0], owners[1])))

    return Polytope3(vertices, tuple(facets), tuple(edges))


def convex_hull3(points: Iterable[Sequence[int]]) -> Polytope3:
    pts = sorted({LatticePoint(*p) for p in points})
    if not pts:
        raise PolycoverError("DegenerateInput", "no points given", witness=-1)
    base = _initial_simplex(pts)
    triangles = _incremental_hull(pts, base)
    polytope = _assemble(pts, triangles)
    logger.debug(
        "hull of %d points: %d vertices, %d edges, %d facets",
        len(pts), len(polytope.vertices), len(polytope.edges), len(polytope.facets),
    )
    return polytope


def contains(P: Polytope3, x: Sequence[Rational]) -> bool:
    return P.contains(x)


def lattice_points(P: Polytope3) -> List[LatticePoint]:
    return P.lattice_points()


def minkowski_sum_points(A: Iterable[LatticePoint], B: Iterable[LatticePoint]) -> List[LatticePoint]:
    B = list(B)
    return sorted({a + b for a in A for b in B})


def special_values(P: Polytope3, a: LinearForm) -> List[Fraction]:
    return sorted({Fraction(a(v)) for v in P.vertices})


##########################################################################
###                              polygons                              ###


@dataclass(frozen=True)
class EmbeddedPolygon:
    """Lattice polygon in a lattice plane, with integer chart coordinates."""

    vertices2d: Tuple[Tuple[int, int], ...]  # counterclockwise
    chart: PlaneChart

    @property
    def plane(self) -> Tuple[LinearForm, Rational]:
        return self.chart.form, self.chart.level

    @property
    def vertices3d(self) -> List[Point]:
        return [self.chart.to_3d(s, t) for s, t in self.vertices2d]

    def contains2d(self, q: Point2) -> bool:
        return polygon_contains(self.vertices2d, q)

    def lattice_points2d(self) -> List[Tuple[int, int]]:
        xs = [p[0] for p in self.vertices2d]
        ys = [p[1] for p in self.vertices2d]
        return [
            (s, t)
            for s in range(min(xs), max(xs) + 1)
            for t in range(min(ys), max(ys) + 1)
            if self.contains2d((s, t))
        ]

    @property
    def is_unimodular_triangle(self) -> bool:
        if len(self.vertices2d) != 3:
            return False
        return abs(cross2(*self.vertices2d)) == 1


@dataclass(frozen=True)
class RationalPolygon:
    """Convex polygon (possibly a segment or a point) in {form(x) = level}."""

    vertices: Tuple[RationalPoint, ...]
    form: LinearForm  # primitive
    level: Fraction

    @cached_property
    def chart(self) -> PlaneChart:
        return plane_lattice_basis(self.form, self.level)

    @property
    def vertices2d(self) -> List[Point2]:
        return [self.chart.to_2d(p) for p in self.vertices]

    @property
    def dimension(self) -> int:
        return min(len(self.vertices) - 1, 2)

    def contains(self, x: Sequence[Rational]) -> bool:
        if self.form(x) != self.level:
            return False
        return polygon_contains(self.vertices2d, self.chart.to_2d(x))


def polygon_contains(cycle: Sequence[Point2], q: Point2) -> bool:
    if len(cycle) == 1:
        return tuple(cycle[0]) == tuple(q)
    if len(cycle) == 2:
        a, b = cycle
        if cross2(a, b, q) != 0:
            return False
        return min(a, b) <= tuple(q) <= max(a, b)
    return all(cross2(cycle[i], cycle[(i + 1) % len(cycle)], q) >= 0 for i in range(len(cycle)))


def facet_polygon(P: Polytope3, index: int) -> EmbeddedPolygon:
    chart = P.facet_chart(index)
    cycle = [chart.lattice_to_2d(p) for p in P.facet_points(index)]
    start = cycle.index(min(cycle))
    return EmbeddedPolygon(tuple(cycle[start:] + cycle[:start]), chart)


def slice(P: Polytope3, a: LinearForm, c: Rational) -> RationalPolygon:
    """The hyperplane cut P ∩ {a(x) = c}, vertices in cyclic order."""
    c = Fraction(c)
    values = [a(v) for v in P.vertices]
    if c < min(values) or c > max(values):
        raise PolycoverError(
            "EmptySlice", f"level {c} outside [{min(values)}, {max(values)}]"
        )
    points = {as_rational(v) for v, value in zip(P.vertices, values) if value == c}
    for edge in P.edges:
        i, j = edge.ends
        ai, aj = values[i], values[j]
        if (ai - c) * (aj - c) < 0:
            t = (c - ai) / (aj - ai)
            points.add(as_rational(P.vertices[i] + (P.vertices[j] - P.vertices[i]) * t))

    # Re-express the level for the primitive form so that the plane chart
    # is a lattice chart.
    g = lattice_length(a.a)
    form, level = a.primitive(), c / g
    chart = plane_lattice_basis(form, level)
    to_3d = {chart.to_2d(p): p for p in points}
    ordered = tuple(to_3d[q] for q in convex_hull2(to_3d))
    return RationalPolygon(ordered, form, level)


def is_lattice_polygon(Q: RationalPolygon) -> bool:
    return all(v.is_integral() for v in Q.vertices)


##########################################################################
###                             normal fans                            ###


def _half(r: Tuple[int, int]) -> int:
    return 0 if (r[1] > 0 or (r[1] == 0 and r[0] > 0)) else 1


def _angle_cmp(r: Tuple[int, int], s: Tuple[int, int]) -> int:
    hr, hs = _half(r), _half(s)
    if hr != hs:
        return hr - hs
    cross = r[0] * s[1] - r[1] * s[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


@dataclass(frozen=True)
class NormalFan2:
    # Primitive rays sorted by angle, starting from the smallest angle in [0, 2pi).
    rays: Tuple[Tuple[int, int], ...]

    @classmethod
    def from_rays(cls, rays: Iterable[Tuple[int, int]]) -> "NormalFan2":
        return cls(tuple(sorted(set(rays), key=functools.cmp_to_key(_angle_cmp))))


def _primitive2(x: Rational, y: Rational) -> Tuple[int, int]:
    x, y = Fraction(x), Fraction(y)
    denom = x.denominator * y.denominator
    xi, yi = int(x * denom), int(y * denom)
    g = math.gcd(xi, yi)
    return xi // g, yi // g


def normal_fan2(F: Union[EmbeddedPolygon, RationalPolygon]) -> NormalFan2:
    cycle = list(F.vertices2d)
    if len(cycle) < 3:
        raise PolycoverError(
            "LowDimensional", f"polygon with {len(cycle)} vertices has no 2-dimensional fan"
        )
    rays = []
    for i in range(len(cycle)):
        p, q = cycle[i], cycle[(i + 1) % len(cycle)]
        ex, ey = q[0] - p[0], q[1] - p[1]
        rays.append(_primitive2(ey, -ex))
    return NormalFan2.from_rays(rays)


def fan_coarsens(coarse: NormalFan2, fine: NormalFan2) -> bool:
    return set(coarse.rays) <= set(fine.rays)


##########################################################################
###                               ray exit                             ###


class RayExit(NamedTuple):
    t: Fraction
    point: RationalPoint
    facets: List[int]


def ray_exit(P: Polytope3, v: Sequence[Rational]) -> RayExit:
    """Where the half ray R>=0 v leaves P (origin must be interior)."""
    v = as_rational(v)
    if v.is_zero():
        raise PolycoverError("ZeroDirection", "ray direction is 0")
    if not all(f.offset < 0 for f in P.facets):
        raise PolycoverError("OriginNotInterior", "origin is not an interior point")
    best: Optional[Fraction] = None
    hits: List[int] = []
    for k, facet in enumerate(P.facets):
        rate = facet.normal(v)
        if rate >= 0:
            continue
        t = Fraction(facet.offset) / rate
        if best is None or t < best:
            best, hits = t, [k]
        elif t == best:
            hits.append(k)
    assert best is not None, "a bounded polytope is left in every direction"
    return RayExit(best, v * best, hits)
