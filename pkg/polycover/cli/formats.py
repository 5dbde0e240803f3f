"""
Polytope and certificate files.

Both are JSON documents written in a canonical layout: keys in fixed order,
one vertex or piece per line, vertices sorted lexicographically. Writing the
same object twice gives byte-identical files. See docs/file-formats.md.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union

from polycover.covering import CoverPiece, CoveringCertificate, Provenance
from polycover.errors import PolycoverError
from polycover.geometry import convex_hull3, Parallelepiped, Polytope3, Simplex3
from polycover.lattice import LatticePoint

logger = logging.getLogger(__name__)

CERTIFICATE_FORMAT = "polycover-certificate"
CERTIFICATE_VERSION = 1


def _row(obj: Any) -> str:
    return json.dumps(obj, separators=(", ", ": "))


def _parse_point(value: Any, where: str) -> LatticePoint:
    if (
        not isinstance(value, list)
        or len(value) != 3
        or not all(isinstance(c, int) and not isinstance(c, bool) for c in value)
    ):
        raise PolycoverError("ParseError", f"{where}: expected an integer triple, got {value!r}")
    return LatticePoint(*value)


def _load_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, "r") as f:
            return json.load(f)
    except OSError as e:
        raise PolycoverError("ParseError", f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise PolycoverError("ParseError", f"{path}: {e}") from e


def _hull(points: List[LatticePoint], where: str) -> Polytope3:
    try:
        return convex_hull3(points)
    except PolycoverError as e:
        if e.code != "DegenerateInput":
            raise
        raise PolycoverError("ParseError", f"{where}: {e}") from e


##########################################################################
###                             polytope files                         ###


@dataclass
class PolytopeFile:
    polytope: Polytope3
    name: Optional[str] = None

    def dumps(self) -> str:
        lines = ["{", '    "dim": 3,']
        if self.name:
            lines.append(f'    "name": {json.dumps(self.name)},')
        lines.append('    "vertices": [')
        rows = [f"        {_row(list(v))}" for v in self.polytope.vertices]
        lines.append(",\n".join(rows))
        lines += ["    ]", "}"]
        return "\n".join(lines) + "\n"

    def write(self, path: Union[str, Path]) -> None:
        with open(path, "w") as f:
            f.write(self.dumps())

    @classmethod
    def loads_obj(cls, doc: Any, where: str) -> "PolytopeFile":
        if not isinstance(doc, dict):
            raise PolycoverError("ParseError", f"{where}: expected a JSON object")
        if doc.get("dim") != 3:
            raise PolycoverError("ParseError", f"{where}: dim must be 3, got {doc.get('dim')!r}")
        vertices = doc.get("vertices")
        if not isinstance(vertices, list):
            raise PolycoverError("ParseError", f"{where}: missing vertex list")
        points = [_parse_point(v, f"{where}: vertex {i}") for i, v in enumerate(vertices)]
        name = doc.get("name")
        if name is not None and not isinstance(name, str):
            raise PolycoverError("ParseError", f"{where}: name must be a string")
        return cls(_hull(points, where), name)

    @classmethod
    def read(cls, path: Union[str, Path]) -> "PolytopeFile":
        return cls.loads_obj(_load_json(path), str(path))


def load_polytope(spec: str) -> Tuple[str, Polytope3]:
    """A polytope from a file path or a catalog name."""
    path = Path(spec)
    if path.is_file():
        loaded = PolytopeFile.read(path)
        return loaded.name or path.stem, loaded.polytope

    # Localized import: the catalog is only needed for named polytopes.
    from polycover.catalog.catalog import build_polytope, resolve_polytope_config

    try:
        config = resolve_polytope_config(spec)
    except ValueError:
        raise PolycoverError("ParseError", f"'{spec}' is neither a file nor a catalog name") from None
    logger.debug("building catalog polytope %s (%s)", config.name, config.recipe.value)
    return config.name, build_polytope(config)


##########################################################################
###                           certificate files                        ###


def _piece_record(piece: CoverPiece) -> dict:
    record = {"type": piece.kind, "provenance": piece.provenance.value, "facet": piece.facet}
    if piece.is_simplex:
        record["vertices"] = [list(v) for v in piece.shape.vertices]
    else:
        Q = piece.shape
        record["anchor"] = list(Q.anchor)
        record["edges"] = [list(e) for e in Q.edges]
    return record


def _parse_piece(record: Any, where: str) -> CoverPiece:
    if not isinstance(record, dict):
        raise PolycoverError("ParseError", f"{where}: expected an object")
    try:
        provenance = Provenance(record.get("provenance"))
    except ValueError:
        raise PolycoverError("ParseError", f"{where}: unknown provenance {record.get('provenance')!r}") from None
    facet = record.get("facet")
    if not isinstance(facet, int) or isinstance(facet, bool):
        raise PolycoverError("ParseError", f"{where}: facet must be an integer")

    kind = record.get("type")
    if kind == "simplex":
        vertices = record.get("vertices")
        if not isinstance(vertices, list) or len(vertices) != 4:
            raise PolycoverError("ParseError", f"{where}: a simplex needs 4 vertices")
        shape = Simplex3(tuple(_parse_point(v, where) for v in vertices))
    elif kind == "box":
        edges = record.get("edges")
        if not isinstance(edges, list) or len(edges) != 3:
            raise PolycoverError("ParseError", f"{where}: a box needs 3 edges")
        shape = Parallelepiped(_parse_point(record.get("anchor"), where), *(_parse_point(e, where) for e in edges))
    else:
        raise PolycoverError("ParseError", f"{where}: unknown piece type {kind!r}")
    return CoverPiece(shape, provenance, facet)


@dataclass
class CertificateFile:
    certificate: CoveringCertificate

    def dumps(self) -> str:
        cert = self.certificate
        lines = [
            "{",
            f'    "format": "{CERTIFICATE_FORMAT}",',
            f'    "version": {CERTIFICATE_VERSION},',
            '    "host": [',
            ",\n".join(f"        {_row(list(v))}" for v in cert.host.vertices),
            "    ],",
        ]
        if cert.pieces:
            lines.append('    "pieces": [')
            lines.append(",\n".join(f"        {_row(_piece_record(p))}" for p in cert.pieces))
            lines.append("    ]")
        else:
            lines.append('    "pieces": []')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def write(self, path: Union[str, Path]) -> None:
        with open(path, "w") as f:
            f.write(self.dumps())

    @classmethod
    def read(cls, path: Union[str, Path]) -> "CertificateFile":
        where = str(path)
        doc = _load_json(path)
        if not isinstance(doc, dict) or doc.get("format") != CERTIFICATE_FORMAT:
            raise PolycoverError("ParseError", f"{where}: not a {CERTIFICATE_FORMAT} file")
        if doc.get("version") != CERTIFICATE_VERSION:
            raise PolycoverError("ParseError", f"{where}: unsupported version {doc.get('version')!r}")
        host = doc.get("host")
        pieces = doc.get("pieces")
        if not isinstance(host, list) or not isinstance(pieces, list):
            raise PolycoverError("ParseError", f"{where}: missing host or pieces")
        host_points = [_parse_point(v, f"{where}: host vertex {i}") for i, v in enumerate(host)]
        parsed = [_parse_piece(p, f"{where}: piece {k}") for k, p in enumerate(pieces)]
        return cls(CoveringCertificate(_hull(host_points, where), parsed))
