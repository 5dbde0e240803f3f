import signal
import sys

from polycover.cli.cli import arg_init, build_parser


def signal_handler(sig, frame):
    print("\nInterrupted by user. Bye!\n")
    sys.exit(130)


def main(argv=None) -> int:
    # argparse exits with 2 on usage errors
    args = build_parser().parse_args(argv)
    try:
        args = arg_init(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    from polycover.cli.commands import run_verb

    return run_verb(args)


if __name__ == "__main__":
    # Set the signal handler for SIGINT
    signal.signal(signal.SIGINT, signal_handler)
    sys.exit(main())
