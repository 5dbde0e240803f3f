# Verb implementations. Each *_main returns the process exit code:
# 0 success, 1 mathematical failure (check failed, input refused),
# 2 usage or parse error.

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import List, Optional

from polycover.errors import PolycoverError, USAGE_ERROR_CODES
from polycover.lattice import LatticePoint

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _parse_triple(text: str, what: str) -> LatticePoint:
    parts = text.replace(" ", "").split(",")
    try:
        values = [int(p) for p in parts]
    except ValueError:
        values = []
    if len(values) != 3:
        raise PolycoverError("InvalidParameter", f"{what} must be x,y,z with integers, got '{text}'")
    return LatticePoint(*values)


def _emit(document, out: Optional[str]) -> None:
    """Write a PolytopeFile or CertificateFile to `out`, or to stdout."""
    if out is None:
        sys.stdout.write(document.dumps())
    else:
        document.write(out)
        logger.info("wrote %s", out)


##########################################################################
###                                check                               ###


@dataclass
class CheckArgs:
    polytope: str
    smooth: bool = False
    centrally_symmetric: bool = False
    idp: bool = False
    n_max: int = 4

    def __post_init__(self):
        if not (self.smooth or self.centrally_symmetric or self.idp):
            self.smooth = self.centrally_symmetric = self.idp = True
        if self.n_max < 2:
            raise PolycoverError("InvalidParameter", f"--nmax must be >= 2, got {self.n_max}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CheckArgs":
        return cls(
            polytope=args.polytope,
            smooth=args.smooth,
            centrally_symmetric=args.centrally_symmetric,
            idp=args.idp,
            n_max=args.nmax if args.nmax is not None else args.settings.n_max,
        )


def check_main(args) -> int:
    from polycover.analysis import check_centrally_symmetric, check_smooth, idp_check
    from polycover.cli.formats import load_polytope

    check_args = CheckArgs.from_args(args)
    name, P = load_polytope(check_args.polytope)
    print(f"{name}: {len(P.vertices)} vertices, {len(P.edges)} edges, {len(P.facets)} facets")

    passed = True
    if check_args.smooth:
        report = check_smooth(P)
        print(f"smooth: {'PASS' if report.is_smooth else 'FAIL'} (simple: {'yes' if report.is_simple else 'no'})")
        for offending in report.offending_vertices:
            det = "not simple" if offending.determinant is None else f"det {offending.determinant}"
            print(f"  vertex {offending.vertex!r}: directions {offending.directions}, {det}")
        passed &= report.is_smooth
    if check_args.centrally_symmetric:
        report = check_centrally_symmetric(P)
        if report.origin_centered:
            print("centrally symmetric: PASS")
        elif report.symmetric:
            print(f"centrally symmetric: FAIL (symmetric about {report.center!r}, not origin-centered)")
        else:
            print("centrally symmetric: FAIL")
        passed &= report.origin_centered
    if check_args.idp:
        report = idp_check(P, check_args.n_max)
        if report.is_idp_up_to:
            print(f"IDP up to n={report.checked_up_to}: PASS")
        else:
            failure = report.failure
            print(f"IDP up to n={report.checked_up_to}: FAIL at n={failure.n}, witness {failure.witness!r}")
        passed &= report.is_idp_up_to
    return EXIT_OK if passed else EXIT_FAILURE


##########################################################################
###                                cover                               ###


@dataclass
class CoverArgs:
    polytope: str
    out: Optional[str] = None
    grid_denominator: int = 4

    def __post_init__(self):
        if self.grid_denominator < 1:
            raise PolycoverError("InvalidParameter", f"--verify-grid must be >= 1, got {self.grid_denominator}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CoverArgs":
        grid = args.verify_grid if args.verify_grid is not None else args.settings.grid_denominator
        return cls(polytope=args.polytope, out=args.out, grid_denominator=grid)


def cover_main(args) -> int:
    from polycover.cli.formats import CertificateFile, load_polytope
    from polycover.covering import cover_polytope, verify_cover

    cover_args = CoverArgs.from_args(args)
    name, P = load_polytope(cover_args.polytope)
    cert = cover_polytope(P)
    _emit(CertificateFile(cert), cover_args.out)

    report = verify_cover(cert, cover_args.grid_denominator)
    print(f"{name}: {report.summary()}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAILURE


##########################################################################
###                              decompose                             ###


@dataclass
class DecomposeArgs:
    polytope: str
    point: LatticePoint
    n: int = 2
    cert: Optional[str] = None

    def __post_init__(self):
        if self.n < 1:
            raise PolycoverError("InvalidParameter", f"--n must be >= 1, got {self.n}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "DecomposeArgs":
        return cls(
            polytope=args.polytope,
            point=_parse_triple(args.point, "--point"),
            n=args.n,
            cert=args.cert,
        )


def decompose_main(args) -> int:
    from polycover.analysis import exhaustive_decomposition
    from polycover.cli.formats import CertificateFile, load_polytope
    from polycover.covering import cover_polytope, decompose_via_cover

    decompose_args = DecomposeArgs.from_args(args)
    _, P = load_polytope(decompose_args.polytope)
    p, n = decompose_args.point, decompose_args.n
    if not P.contains_in_dilate(p, n):
        raise PolycoverError("OutsideDilate", f"{p!r} is not in {n}P")

    try:
        if decompose_args.cert:
            cert = CertificateFile.read(decompose_args.cert).certificate
        else:
            cert = cover_polytope(P)
        witness = decompose_via_cover(P, cert, p, n)
    except PolycoverError as e:
        if e.code != "NotCoverable":
            raise
        logger.info("no certificate (%s); searching exhaustively", e)
        try:
            witness = exhaustive_decomposition(P, p, n)
        except PolycoverError as e:
            if e.code != "NoDecomposition":
                raise
            print(f"no decomposition: {p!r} is not a sum of {n} lattice points of P")
            return EXIT_FAILURE

    print(" + ".join(repr(q) for q in witness.parts) + f" = {p!r}")
    return EXIT_OK


##########################################################################
###                                 gen                                ###


@dataclass
class GenArgs:
    kind: str
    n: int = 1
    pairs: Optional[List[LatticePoint]] = None
    depth: int = 1
    seed: int = 0
    chisels: int = 2
    name: Optional[str] = None
    out: Optional[str] = None

    def __post_init__(self):
        if self.n < 1:
            raise PolycoverError("InvalidParameter", f"--n must be >= 1, got {self.n}")
        if self.depth < 1:
            raise PolycoverError("InvalidParameter", f"--depth must be >= 1, got {self.depth}")
        if self.chisels < 0:
            raise PolycoverError("InvalidParameter", f"--chisels must be >= 0, got {self.chisels}")
        if self.kind == "chiseled" and not self.pairs:
            raise PolycoverError("InvalidParameter", "`gen chiseled` needs --pairs")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "GenArgs":
        pairs = [_parse_triple(t, "--pairs entry") for t in args.pairs.split(";") if t.strip()]
        return cls(
            kind=args.kind,
            n=args.n,
            pairs=pairs,
            depth=args.depth,
            seed=args.seed,
            chisels=args.chisels,
            name=args.name,
            out=args.out,
        )


def gen_main(args) -> int:
    from polycover import generators
    from polycover.cli.formats import PolytopeFile

    gen_args = GenArgs.from_args(args)
    if gen_args.kind == "cube":
        P = generators.cube(gen_args.n)
    elif gen_args.kind == "chiseled":
        P = generators.chiseled_cube(gen_args.n, gen_args.pairs, gen_args.depth)
    elif gen_args.kind == "counterexample":
        P = generators.counterexample_simplex()
    else:
        P = generators.random_cs_smooth(gen_args.seed, gen_args.n, gen_args.chisels)
    _emit(PolytopeFile(P, gen_args.name), gen_args.out)
    return EXIT_OK


##########################################################################
###                                 list                               ###


def list_main(args) -> int:
    from polycover.catalog.catalog import load_catalog

    configs = load_catalog()

    # Build the table in-memory so that we can align the text nicely.
    cols = {
        "Polytope": [name for name in configs],
        "Aliases": [", ".join(c.aliases) for c in configs.values()],
        "Recipe": [c.recipe.value for c in configs.values()],
        "Parameters": [", ".join(f"{k}={v}" for k, v in c.params.items()) for c in configs.values()],
    }
    col_widths = {key: max(*[len(s) for s in vals], len(key)) + 1 for key, vals in cols.items()}

    print()
    print(*[key.ljust(width) for key, width in col_widths.items()])
    print(*["-" * width for width in col_widths.values()])
    for i in range(len(configs)):
        row = [col[i] for col in cols.values()]
        print(*[val.ljust(width) for val, width in zip(row, col_widths.values())])
    print()
    return EXIT_OK


##########################################################################
###                              dispatch                              ###


def run_verb(args) -> int:
    from polycover.export import export_main

    mains = {
        "check": check_main,
        "cover": cover_main,
        "decompose": decompose_main,
        "gen": gen_main,
        "export": export_main,
        "list": list_main,
    }
    try:
        return mains[args.command](args)
    except PolycoverError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE if e.code in USAGE_ERROR_CODES else EXIT_FAILURE
    except ValueError as e:
        # Malformed configuration or environment.
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
