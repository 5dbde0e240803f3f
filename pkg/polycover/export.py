"""
OFF boundary meshes of polytopes and certificate pieces.

A polytope becomes one OFF file. A certificate becomes the host mesh plus
one file per piece (``<stem>_piece_<k>.off``) whose header comments record
the piece type, provenance and source facet.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import jinja2

from polycover.errors import PolycoverError
from polycover.geometry import convex_hull3, Polytope3
from polycover.lattice import LatticePoint

logger = logging.getLogger(__name__)

OFF_TEMPLATE = jinja2.Template(
    """OFF
{% for line in comments %}# {{ line }}
{% endfor %}{{ vertices|length }} {{ faces|length }} 0
{% for v in vertices %}{{ v|join(" ") }}
{% endfor %}{% for f in faces %}{{ f|length }} {{ f|join(" ") }}
{% endfor %}""",
    keep_trailing_newline=True,
)


def polytope_to_off(P: Polytope3, comments: Sequence[str] = ()) -> str:
    # Facet cycles are counterclockwise from outside, as OFF viewers expect.
    return OFF_TEMPLATE.render(
        comments=list(comments),
        vertices=[list(v) for v in P.vertices],
        faces=[list(f.vertices) for f in P.facets],
    )


def piece_to_off(corners: Sequence[LatticePoint], comments: Sequence[str]) -> str:
    return polytope_to_off(convex_hull3(corners), comments)


def export_certificate(cert, out: Path) -> List[Path]:
    """Write the host mesh to ``out`` and one mesh per piece next to it."""
    written = [out]
    out.write_text(polytope_to_off(cert.host, [f"host of a certificate with {len(cert.pieces)} pieces"]))
    if not cert.pieces:
        logger.warning("certificate has no pieces; exported the host only")
    for k, piece in enumerate(cert.pieces):
        path = out.with_name(f"{out.stem}_piece_{k}{out.suffix}")
        comments = [f"piece {k}: {piece.kind}", f"provenance {piece.provenance.value} facet {piece.facet}"]
        path.write_text(piece_to_off(piece.vertices, comments))
        written.append(path)
    return written


@dataclass
class ExportArgs:
    out: Path
    polytope: Optional[str] = None
    cert: Optional[str] = None
    format: str = "off"

    def __post_init__(self):
        if self.format != "off":
            raise PolycoverError("InvalidParameter", f"unsupported format {self.format}")
        if (self.polytope is None) == (self.cert is None):
            raise PolycoverError("InvalidParameter", "export needs a polytope or --cert, not both")

    @classmethod
    def from_args(cls, args) -> "ExportArgs":
        return cls(out=Path(args.out), polytope=args.polytope, cert=args.cert, format=args.format)


def export_main(args) -> int:
    from polycover.cli.formats import CertificateFile, load_polytope

    export_args = ExportArgs.from_args(args)
    out = export_args.out
    if export_args.cert:
        cert = CertificateFile.read(export_args.cert).certificate
        written = export_certificate(cert, out)
        print(f"wrote {len(written)} OFF files ({len(written) - 1} pieces)")
    else:
        name, P = load_polytope(export_args.polytope)
        out.write_text(polytope_to_off(P, [name]))
        print(f"wrote {out}")
    return 0
