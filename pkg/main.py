"""Command-line entrypoint for depthlab.

Configures logging on stderr (stdout carries command results), parses the
flags and hands the subcommand to the controller. ``main`` returns the
process exit code: 0 success, 1 unexpected failure, 2 usage or config
error, 3 data error.
"""

import logging
import sys

from controller.cli_controller import EXIT_USAGE, CliController
from routes.cli_routes import build_parser

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

logger = logging.getLogger(__name__)


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    """Basic console logging on stderr."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: list[str] | None = None) -> int:
    controller = CliController()
    parser = build_parser(controller)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags and 0 after --help/--version
        return EXIT_USAGE if exc.code not in (0, None) else 0
    configure_logging(args.verbose, args.quiet)
    return controller.dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
