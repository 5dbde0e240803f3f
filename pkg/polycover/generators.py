# Test polytopes: dilated cubes, chiseled cubes, the non-IDP simplex and
# seeded random chisel sequences. Every output is validated before it is
# returned.

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from polycover.analysis import check_centrally_symmetric, check_smooth
from polycover.errors import PolycoverError
from polycover.geometry import convex_hull3, facet_polygon, Polytope3
from polycover.lattice import is_unimodular_basis, LatticePoint

logger = logging.getLogger(__name__)


def cube(n: int) -> Polytope3:
    """n times [-1, 1]^3."""
    if n < 1:
        raise PolycoverError("InvalidParameter", f"cube size must be >= 1, got {n}")
    P = convex_hull3((x, y, z) for x in (-n, n) for y in (-n, n) for z in (-n, n))
    assert check_smooth(P).is_smooth and check_centrally_symmetric(P).origin_centered
    return P


def counterexample_simplex() -> Polytope3:
    """A lattice simplex without IDP: (1,1,1) lies in 2P but is no sum of
    two of its lattice points."""
    return convex_hull3([(0, 0, 0), (1, 0, 0), (0, 0, 1), (1, 2, 1)])


@dataclass(frozen=True)
class ChiselSpec:
    vertex: LatticePoint
    depth: int = 1
    # Also cut -vertex.
    antipodal: bool = False

    def __post_init__(self):
        if self.depth < 1:
            raise PolycoverError("InvalidParameter", f"chisel depth must be >= 1, got {self.depth}")
        object.__setattr__(self, "vertex", LatticePoint(*self.vertex))


def _chisel_vertex(P: Polytope3, vertex: LatticePoint, depth: int) -> Polytope3:
    i = P.vertex_index(vertex)
    directions = P.edge_directions(i)
    if len(directions) != 3:
        raise PolycoverError("NotSimpleVertex", f"{vertex!r} has {len(directions)} edges")
    if not is_unimodular_basis(*directions):
        raise PolycoverError(
            "NotSmoothVertex", f"edge directions {directions} at {vertex!r} are not a lattice basis", witness=vertex
        )
    lengths = P.edge_lengths(i)
    if min(lengths) < depth + 1:
        raise PolycoverError(
            "ChiselTooDeep", f"edge lengths {lengths} at {vertex!r} do not exceed depth {depth}"
        )

    cut = [vertex + u * depth for u in directions]
    points = [v for v in P.vertices if v != vertex] + cut
    result = convex_hull3(points)
    if len(result.vertices) != len(P.vertices) + 2:
        raise PolycoverError(
            "ChiselTooDeep",
            f"cut at {vertex!r} gave {len(result.vertices)} vertices, expected {len(P.vertices) + 2}",
        )

    new_facet = next(
        k for k, facet in enumerate(result.facets)
        if set(cut) == {result.vertices[j] for j in facet.vertices}
    )
    smooth = check_smooth(result).is_smooth
    if depth == 1:
        if not smooth or not facet_polygon(result, new_facet).is_unimodular_triangle:
            raise PolycoverError("SmoothnessLost", f"depth-1 cut at {vertex!r} broke smoothness")
    elif not smooth:
        logger.warning("depth-%d cut at %r is not smooth", depth, vertex)
    logger.debug("chiseled %r at depth %d: facet %d", vertex, depth, new_facet)
    return result


def chisel(P: Polytope3, spec: ChiselSpec) -> Polytope3:
    """Cut off the corner of P at spec.vertex through the points at lattice
    distance ``depth`` along its edges (and the opposite corner if antipodal)."""
    if spec.vertex not in P.vertices:
        raise PolycoverError("NotAVertex", f"{spec.vertex!r} is not a vertex")
    if spec.antipodal and -spec.vertex not in P.vertices:
        raise PolycoverError("NotAVertex", f"antipode {-spec.vertex!r} is not a vertex")
    result = _chisel_vertex(P, spec.vertex, spec.depth)
    if spec.antipodal:
        result = _chisel_vertex(result, -spec.vertex, spec.depth)
    return result


def chiseled_cube(n: int, vertices: Sequence[Sequence[int]], depth: int = 1) -> Polytope3:
    """cube(n) with successive antipodal chisels at the given vertices."""
    P = cube(n)
    for vertex in vertices:
        P = chisel(P, ChiselSpec(LatticePoint(*vertex), depth, antipodal=True))
    return P


def _eligible_vertices(P: Polytope3) -> List[LatticePoint]:
    vertex_set = set(P.vertices)
    eligible = []
    for i, v in enumerate(P.vertices):
        # One representative per antipodal pair.
        if v <= -v or -v not in vertex_set:
            continue
        if P.degree(i) == 3 and min(P.edge_lengths(i)) >= 2:
            eligible.append(v)
    return sorted(eligible)


def random_cs_smooth(seed: int, n: int, chisels: int) -> Polytope3:
    """cube(n) after up to ``chisels`` antipodal depth-1 chisels at vertices
    drawn by ``np.random.default_rng(seed)``."""
    if chisels < 0:
        raise PolycoverError("InvalidParameter", f"chisel count must be >= 0, got {chisels}")
    rng = np.random.default_rng(seed)
    P = cube(n)
    for step in range(chisels):
        eligible = _eligible_vertices(P)
        if not eligible:
            logger.debug("seed %d: no eligible vertex after %d chisels", seed, step)
            break
        vertex = eligible[int(rng.integers(len(eligible)))]
        try:
            P = chisel(P, ChiselSpec(vertex, 1, antipodal=True))
        except PolycoverError as e:
            logger.debug("seed %d: skipping chisel at %r (%s)", seed, vertex, e.code)
    assert check_smooth(P).is_smooth and check_centrally_symmetric(P).origin_centered
    return P
