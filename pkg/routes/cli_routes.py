"""routes.cli_routes
+---------------------------------------------
Command-line parser wiring depthlab subcommands to
:class:`controller.cli_controller.CliController` methods.

This module contains *no* business logic; it only declares flags and
binds each subcommand to its controller method through ``handler``.

Example
-------
>>> from controller.cli_controller import CliController
>>> from routes.cli_routes import build_parser
>>> args = build_parser(CliController()).parse_args(["infdim", "--seed", "1"])
>>> args.command
'infdim'
"""

import argparse

from backend import __version__
from backend.models.halfspace_depth import DEFAULT_APPROX_DIRECTIONS
from backend.models.sequence_depth import PROFILES
from backend.models.tukey_median import DEFAULT_REFINEMENT_ROUNDS, DEFAULT_SHRINK
from controller.cli_controller import CliController

METHOD_CHOICES: list[str] = ["auto", "exact1d", "exact2d", "combinatorial", "approx"]


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _grid_nodes(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"a grid needs at least 2 nodes per axis, got {text}")
    return value


def _subparser(
    commands: argparse._SubParsersAction, name: str, help_text: str
) -> argparse.ArgumentParser:
    parser = commands.add_parser(name, help=help_text, allow_abbrev=False)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    verbosity.add_argument("--quiet", action="store_true", help="log warnings and errors only")
    return parser


def _search_flags(parser: argparse.ArgumentParser, defaults: bool = True) -> None:
    """Median-search settings; ``defaults=False`` leaves them unset (study overrides)."""
    parser.add_argument(
        "--rounds", type=int, default=DEFAULT_REFINEMENT_ROUNDS if defaults else None
    )
    parser.add_argument("--shrink", type=float, default=DEFAULT_SHRINK if defaults else None)


def build_parser(controller: CliController) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="depthlab",
        description="Tukey half-space depth, medians and depth-based diagnostics.",
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=f"depthlab {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    depth = _subparser(commands, "depth", "depth of one point")
    depth.add_argument("--input", required=True)
    depth.add_argument("--point", required=True)
    depth.add_argument("--method", choices=METHOD_CHOICES, default="auto")
    depth.add_argument("--dirs", type=_positive_int, default=DEFAULT_APPROX_DIRECTIONS)
    depth.add_argument("--seed", type=_seed)
    depth.add_argument("--out")
    depth.set_defaults(handler=controller.cmd_depth)

    median = _subparser(commands, "median", "Tukey median and its depth")
    median.add_argument("--input", required=True)
    median.add_argument("--seed", type=_seed)
    median.add_argument("--dirs", type=_positive_int, default=DEFAULT_APPROX_DIRECTIONS)
    median.add_argument("--out")
    _search_flags(median)
    median.set_defaults(handler=controller.cmd_median)

    symtest = _subparser(commands, "symtest", "bootstrap test of angular symmetry")
    symtest.add_argument("--input", required=True)
    symtest.add_argument("--seed", type=_seed)
    symtest.add_argument("--bootstrap", type=_positive_int, default=1000)
    symtest.add_argument("--alpha", type=float, default=0.05)
    symtest.add_argument("--dirs", type=_positive_int, default=DEFAULT_APPROX_DIRECTIONS)
    symtest.add_argument("--out")
    _search_flags(symtest)
    symtest.set_defaults(handler=controller.cmd_symtest)

    diagnose = _subparser(commands, "diagnose", "r(q) sphericity curve")
    diagnose.add_argument("--input")
    diagnose.add_argument("--p")
    diagnose.add_argument("--d", type=_positive_int, default=2)
    diagnose.add_argument("--n", type=_positive_int)
    diagnose.add_argument("--qgrid", default="0.05:0.95:0.05")
    diagnose.add_argument("--method", choices=METHOD_CHOICES, default="auto")
    diagnose.add_argument("--dirs", type=_positive_int, default=DEFAULT_APPROX_DIRECTIONS)
    diagnose.add_argument("--seed", type=_seed)
    diagnose.add_argument("--out")
    diagnose.add_argument("--svg")
    diagnose.set_defaults(handler=controller.cmd_diagnose)

    contours = _subparser(commands, "contours", "depth and density contour grids")
    contours.add_argument("--input")
    contours.add_argument("--p")
    contours.add_argument("--d", type=_positive_int, default=2)
    contours.add_argument("--n", type=_positive_int)
    contours.add_argument("--grid", type=_grid_nodes, default=60)
    contours.add_argument("--levels", required=True)
    contours.add_argument("--seed", type=_seed)
    contours.add_argument("--out", required=True)
    contours.add_argument("--svg")
    contours.set_defaults(handler=controller.cmd_contours)

    infdim = _subparser(commands, "infdim", "depth bound decay for l2 sequences")
    infdim.add_argument("--dmax", type=_positive_int, default=1000)
    infdim.add_argument("--draws", type=_positive_int, default=100)
    infdim.add_argument("--profile", choices=list(PROFILES), default=PROFILES[0])
    infdim.add_argument("--seed", type=_seed)
    infdim.add_argument("--out")
    infdim.set_defaults(handler=controller.cmd_infdim)

    study = _subparser(commands, "study", "rejection-rate study from a config file")
    study.add_argument("--config", required=True)
    study.add_argument("--out", required=True)
    study.add_argument("--seed", type=_seed)
    study.add_argument("--bootstrap", type=_positive_int)
    study.add_argument("--replications", type=_positive_int)
    study.add_argument("--workers", type=_positive_int, default=1)
    _search_flags(study, defaults=False)
    study.set_defaults(handler=controller.cmd_study)

    return parser
