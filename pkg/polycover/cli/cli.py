import argparse
import logging
import sys

from polycover.utils.logging_utils import level_from_env, SingletonLogger

try:
    _log_level = level_from_env()
except ValueError as e:
    print(e, file=sys.stderr)
    _log_level = logging.INFO

logging.basicConfig(level=_log_level, format="%(message)s")
logger = logging.getLogger(__name__)


# Subcommands that only read the catalog
INVENTORY_VERBS = ["list"]

# Subcommands that take a polytope (file path or catalog name)
POLYTOPE_VERBS = ["check", "cover", "decompose", "export"]

# List of all supported subcommands in polycover
KNOWN_VERBS = POLYTOPE_VERBS + ["gen"] + INVENTORY_VERBS

VERB_HELP = {
    "check": "Check smoothness, central symmetry and IDP of a polytope",
    "cover": "Build and verify a covering certificate",
    "decompose": "Write a lattice point of nP as a sum of n lattice points of P",
    "gen": "Generate a polytope file",
    "export": "Export a polytope or certificate as OFF meshes",
    "list": "List the named polytopes of the catalog",
}

GEN_KINDS = ["cube", "chiseled", "counterexample", "random"]


# Given a arg parser and a subcommand (verb), add the appropriate arguments
# for that subcommand.
def add_arguments_for_verb(parser, verb: str) -> None:
    if verb in INVENTORY_VERBS:
        _add_cli_metadata_args(parser)
        return

    if verb == "export":
        _add_export_input_args(parser)
    elif verb in POLYTOPE_VERBS:
        _add_polytope_input_args(parser)

    if verb == "check":
        _add_check_args(parser)
    if verb == "cover":
        _add_cover_args(parser)
    if verb == "decompose":
        _add_decompose_args(parser)
    if verb == "gen":
        _add_gen_args(parser)
    if verb == "export":
        _add_export_args(parser)

    _add_cli_metadata_args(parser)


def _add_polytope_input_args(parser) -> None:
    parser.add_argument(
        "polytope",
        type=str,
        help="Polytope file (JSON) or catalog name, see `polycover.py list`",
    )


def _add_export_input_args(parser) -> None:
    input_parser = parser.add_argument_group(
        "Export Input",
        "Either a polytope or a certificate: `polytope` XOR `--cert`",
    )
    exclusive_parser = input_parser.add_mutually_exclusive_group(required=True)
    exclusive_parser.add_argument(
        "polytope",
        type=str,
        nargs="?",
        default=None,
        help="Polytope file (JSON) or catalog name",
    )
    exclusive_parser.add_argument(
        "--cert",
        type=str,
        default=None,
        help="Certificate file; exports the host and one mesh per piece",
    )


def _add_check_args(parser) -> None:
    check_parser = parser.add_argument_group(
        "Checks", "Properties to check. All of them when none is given."
    )
    check_parser.add_argument("--smooth", action="store_true", help="Simple with unimodular edge directions")
    check_parser.add_argument(
        "--centrally-symmetric",
        action="store_true",
        help="P = -P (a center other than the origin is reported but fails)",
    )
    check_parser.add_argument("--idp", action="store_true", help="Integer decomposition property up to --nmax")
    check_parser.add_argument(
        "--nmax",
        type=int,
        default=None,
        help="Largest dilation factor for --idp. Default: [idp] n_max of the config",
    )


def _add_cover_args(parser) -> None:
    cover_parser = parser.add_argument_group("Cover", "Certificate output and verification")
    cover_parser.add_argument(
        "--out",
        type=str,
        default=None,
        help="Certificate file to write. Default: standard output",
    )
    cover_parser.add_argument(
        "--verify-grid",
        type=int,
        default=None,
        help="Denominator N of the (1/N) grid checked by verification. Default: [cover] grid_denominator",
    )


def _add_decompose_args(parser) -> None:
    decompose_parser = parser.add_argument_group("Decomposition", "Target point and dilation factor")
    decompose_parser.add_argument(
        "--point",
        type=str,
        required=True,
        help="Lattice point x,y,z of nP",
    )
    decompose_parser.add_argument("--n", type=int, default=2, help="Dilation factor. Default: 2")
    decompose_parser.add_argument(
        "--cert",
        type=str,
        default=None,
        help="Certificate file to use. Built on the fly when omitted",
    )


def _add_gen_args(parser) -> None:
    parser.add_argument("kind", type=str, choices=GEN_KINDS, help="Generator to run")
    gen_parser = parser.add_argument_group("Generator Parameters")
    gen_parser.add_argument("--n", type=int, default=1, help="Cube size, the cube is n[-1,1]^3. Default: 1")
    gen_parser.add_argument(
        "--pairs",
        type=str,
        default="",
        help='Vertices chiseled with their antipodes, e.g. "2,2,2;2,-2,2"',
    )
    gen_parser.add_argument("--depth", type=int, default=1, help="Chisel depth. Default: 1")
    gen_parser.add_argument("--seed", type=int, default=0, help="Seed for `random`. Default: 0")
    gen_parser.add_argument("--chisels", type=int, default=2, help="Chisel attempts for `random`. Default: 2")
    gen_parser.add_argument("--name", type=str, default=None, help="Name stored in the file")
    gen_parser.add_argument(
        "--out",
        type=str,
        default=None,
        help="Polytope file to write. Default: standard output",
    )


def _add_export_args(parser) -> None:
    export_parser = parser.add_argument_group("Export Output")
    export_parser.add_argument("--format", type=str, default="off", choices=["off"], help="Mesh format")
    export_parser.add_argument(
        "--out",
        type=str,
        required=True,
        help="Output file; certificate pieces go to <stem>_piece_<k>.off next to it",
    )


# Add CLI Args that are general to subcommand cli execution
def _add_cli_metadata_args(parser) -> None:
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Verbose output",
    )
    parser.add_argument(
        "--config",
        type=str,
        default=None,
        help="TOML file overriding the packaged defaults",
    )


def arg_init(args):
    if sys.version_info.major != 3 or sys.version_info.minor < 10:
        raise RuntimeError("Please use Python 3.10 or later.")

    # Localized imports: the config pulls in TOML parsing only when needed
    from polycover.config.config import PolycoverConfig
    from polycover.utils.parallel import configure_workers

    SingletonLogger.get_logger("polycover", logging.DEBUG if args.verbose else _log_level)

    args.settings = PolycoverConfig.load(args.config)
    configure_workers(args.settings.threads)
    logger.debug("settings: %s", args.settings)
    return args


def build_parser() -> argparse.ArgumentParser:
    # Initialize the top-level parser
    parser = argparse.ArgumentParser(
        prog="polycover",
        description="Exact covers of centrally symmetric smooth lattice 3-polytopes",
        add_help=True,
    )

    subparsers = parser.add_subparsers(
        dest="command",
        help="The specific command to run",
    )
    subparsers.required = True

    for verb in KNOWN_VERBS:
        subparser = subparsers.add_parser(verb, help=VERB_HELP[verb])
        add_arguments_for_verb(subparser, verb)
    return parser
