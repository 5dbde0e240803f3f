"""
Property checks on lattice polytopes and integer decompositions.

IDP ("integer decomposition property"): every lattice point of nP is a sum
of n lattice points of P. ``idp_check`` tests this up to a finite n_max only.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, NamedTuple, Optional, Sequence, Union

from polycover.errors import PolycoverError
from polycover.geometry import (
    convex_hull3,
    minkowski_sum_points,
    Parallelepiped,
    Polytope3,
    Simplex3,
)
from polycover.lattice import (
    as_rational,
    columns_det,
    is_unimodular_basis,
    LatticePoint,
    RationalPoint,
    solve3,
    vector_sum,
)

logger = logging.getLogger(__name__)


##########################################################################
###                         simple / smooth / symmetric                ###


def check_simple(P: Polytope3) -> bool:
    return all(P.degree(i) == 3 for i in range(len(P.vertices)))


class OffendingVertex(NamedTuple):
    vertex: LatticePoint
    directions: List[LatticePoint]
    # None for a vertex that is not simple.
    determinant: Optional[int]


@dataclass
class SmoothnessReport:
    is_simple: bool
    is_smooth: bool
    offending_vertices: List[OffendingVertex] = field(default_factory=list)


def check_smooth(P: Polytope3) -> SmoothnessReport:
    offending = []
    simple = True
    for i, vertex in enumerate(P.vertices):
        directions = P.edge_directions(i)
        if len(directions) != 3:
            simple = False
            offending.append(OffendingVertex(vertex, directions, None))
            continue
        if not is_unimodular_basis(*directions):
            offending.append(OffendingVertex(vertex, directions, columns_det(*directions)))
    report = SmoothnessReport(simple, not offending, offending)
    logger.debug("smoothness: simple=%s smooth=%s", report.is_simple, report.is_smooth)
    return report


@dataclass
class SymmetryReport:
    symmetric: bool
    center: Optional[RationalPoint] = None

    @property
    def origin_centered(self) -> bool:
        return self.symmetric and self.center is not None and self.center.is_zero()


def check_centrally_symmetric(P: Polytope3) -> SymmetryReport:
    # The only candidate center is the midpoint of the lex-min and lex-max
    # vertices, which a point reflection must swap.
    lo, hi = P.vertices[0], P.vertices[-1]
    twice_center = lo + hi
    vertex_set = set(P.vertices)
    if any(twice_center - v not in vertex_set for v in P.vertices):
        return SymmetryReport(False)
    center = as_rational(twice_center) / 2
    if not center.is_zero():
        logger.info("polytope is symmetric about %r, not about the origin", center)
    return SymmetryReport(True, center)


def vertex_parallelepiped(P: Polytope3, vertex: Union[int, Sequence[int]]) -> Parallelepiped:
    i = vertex if isinstance(vertex, int) else P.vertex_index(vertex)
    directions = P.edge_directions(i)
    if len(directions) != 3:
        raise PolycoverError(
            "NotSimpleVertex", f"vertex {P.vertices[i]!r} has {len(directions)} edges"
        )
    return Parallelepiped(P.vertices[i], *directions)


def vertex_parallelepiped_empty(P: Polytope3, vertex: Union[int, Sequence[int]]) -> bool:
    Q = vertex_parallelepiped(P, vertex)
    return len(Q.lattice_points()) == 8


##########################################################################
###                                 IDP                                ###


class IdpFailure(NamedTuple):
    n: int
    witness: LatticePoint


@dataclass
class IdpReport:
    checked_up_to: int
    is_idp_up_to: bool
    failure: Optional[IdpFailure] = None


def idp_check(P: Polytope3, n_max: int) -> IdpReport:
    if n_max < 2:
        raise PolycoverError("InvalidParameter", f"n_max must be >= 2, got {n_max}")
    base = P.lattice_points()
    sumset = base
    for k in range(2, n_max + 1):
        # Dilates are enumerated lazily, up to the first failure.
        expected = P.scaled(k).lattice_points()
        sumset = minkowski_sum_points(sumset, base)
        missing = set(expected) - set(sumset)
        if missing:
            witness = min(missing)
            logger.info("IDP fails at n=%d: %r has no decomposition", k, witness)
            return IdpReport(n_max, False, IdpFailure(k, witness))
        logger.debug("n=%d: %d lattice points, all decomposable", k, len(expected))
    return IdpReport(n_max, True)


class PairCheck(NamedTuple):
    holds: bool
    witness: Optional[LatticePoint] = None


def minkowski_pair_check(P: Polytope3, Q: Union[Polytope3, Sequence[int]]) -> PairCheck:
    """Whether every lattice point of P + Q is p1 + p2 with lattice points
    p1 in P and p2 in Q. Q may be a polytope or a single lattice point."""
    if isinstance(Q, Polytope3):
        q_points = Q.lattice_points()
        q_vertices = Q.vertices
    else:
        q_points = q_vertices = [LatticePoint(*Q)]
    total = convex_hull3(v + w for v in P.vertices for w in q_vertices)
    sums = set(minkowski_sum_points(P.lattice_points(), q_points))
    missing = [p for p in total.lattice_points() if p not in sums]
    if missing:
        return PairCheck(False, missing[0])
    return PairCheck(True)


##########################################################################
###                          decompositions                            ###


@dataclass(frozen=True)
class DecompositionWitness:
    n: int
    parts: List[LatticePoint]

    def verify(self, target: Sequence[int], members) -> bool:
        """Parts all lie in ``members`` and add up to ``target``."""
        return (
            len(self.parts) == self.n
            and all(part in members for part in self.parts)
            and vector_sum(self.parts) == tuple(target)
        )


def _check_n(n: int) -> None:
    if n < 1:
        raise PolycoverError("InvalidParameter", f"dilation factor must be >= 1, got {n}")


def decompose_in_simplex(S: Union[Simplex3, Sequence], p: Sequence[int], n: int) -> DecompositionWitness:
    _check_n(n)
    if not isinstance(S, Simplex3):
        S = Simplex3(tuple(LatticePoint(*v) for v in S))
    if not S.is_unimodular:
        raise PolycoverError("NotUnimodular", f"simplex has normalized volume {S.normalized_volume}")
    p = LatticePoint(*p)
    v0, v1, v2, v3 = S.vertices
    # Coordinates of p in n*S; integral because the edge vectors form a basis of Z^3.
    l1, l2, l3 = solve3(v1 - v0, v2 - v0, v3 - v0, p - v0 * n)
    weights = [n - l1 - l2 - l3, l1, l2, l3]
    if any(w < 0 for w in weights):
        raise PolycoverError("OutsideDilate", f"{p!r} is not in {n} times the simplex")
    parts = [v for v, w in zip(S.vertices, weights) for _ in range(int(w))]
    witness = DecompositionWitness(n, parts)
    assert witness.verify(p, set(S.vertices))
    return witness


def _backtracking_decomposition(shape, points: List[LatticePoint], p: LatticePoint, n: int) -> Optional[List[LatticePoint]]:
    point_set = set(points)

    # Memoized on (target, k); the candidates are tried in lexicographic order.
    @lru_cache(maxsize=None)
    def search(target: LatticePoint, k: int):
        if k == 1:
            return (target,) if target in point_set else None
        for q in points:
            rest = target - q
            if shape.contains_in_dilate(rest, k - 1):
                tail = search(rest, k - 1)
                if tail is not None:
                    return (q,) + tail
        return None

    found = search(p, n)
    return list(found) if found is not None else None


def decompose_in_parallelepiped(Q: Parallelepiped, p: Sequence[int], n: int) -> DecompositionWitness:
    _check_n(n)
    p = LatticePoint(*p)
    if not Q.contains_in_dilate(p, n):
        raise PolycoverError("OutsideDilate", f"{p!r} is not in {n} times the parallelepiped")
    points = Q.lattice_points()
    parts = _backtracking_decomposition(Q, points, p, n)
    if parts is None:
        raise PolycoverError("NoDecomposition", f"no decomposition of {p!r} found")
    witness = DecompositionWitness(n, parts)
    assert witness.verify(p, set(points))
    return witness


def exhaustive_decomposition(P: Polytope3, p: Sequence[int], n: int) -> DecompositionWitness:
    """Brute-force search over P's lattice points. Raises ``NoDecomposition``
    when p is a genuine IDP failure."""
    _check_n(n)
    p = LatticePoint(*p)
    if not P.contains_in_dilate(p, n):
        raise PolycoverError("OutsideDilate", f"{p!r} is not in {n}P")
    points = P.lattice_points()
    parts = _backtracking_decomposition(P, points, p, n)
    if parts is None:
        raise PolycoverError(
            "NoDecomposition", f"{p!r} is not a sum of {n} lattice points of P", witness=p
        )
    return DecompositionWitness(n, parts)
