# controller/cli_controller.py

import argparse
import dataclasses
import logging
import math
from pathlib import Path
from typing import Any, Callable

import numpy as np

from backend.exceptions import ConfigError, DataError, DomainError, UsageError
from backend.experiment_helpers import ExperimentHelper
from backend.models import (
    Dataset,
    LpSymmetricModel,
    SequenceModel,
    angular_symmetry_test,
    halfspace_depth,
    run_study,
    tukey_median,
)
from backend.models.dataset import APPROX
from backend.models.halfspace_depth import select_method
from backend.models.lp_symmetric import parse_p
from backend.utils import DatasetLoader
from backend.utils.config_loader import StudyConfigLoader

EXIT_OK: int = 0
EXIT_FAILURE: int = 1
EXIT_USAGE: int = 2
EXIT_DATA: int = 3

# Flags that never change results and are left out of the provenance line.
NON_SEMANTIC_FLAGS: frozenset[str] = frozenset(
    {"verbose", "quiet", "workers", "handler", "command"}
)


def parse_floats(text: str, what: str) -> list[float]:
    """Comma-separated floats, e.g. ``--point 0.5,1``."""
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise UsageError(f"{what} must be comma-separated numbers, got {text!r}") from exc
    if not values:
        raise UsageError(f"{what} is empty")
    return values


def parse_qgrid(text: str) -> np.ndarray:
    """``START:STOP:STEP`` with STOP included when it lies on the grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--qgrid must look like START:STOP:STEP, got {text!r}")
    try:
        start, stop, step = (float(part) for part in parts)
    except ValueError as exc:
        raise UsageError(f"--qgrid must contain numbers, got {text!r}") from exc
    if step <= 0.0 or stop < start:
        raise UsageError(f"--qgrid needs STEP > 0 and STOP >= START, got {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 12)


def canonical_command(args: argparse.Namespace) -> str:
    """Subcommand plus its result-relevant flags in sorted order."""
    flags = [
        f"--{name.replace('_', '-')}={value}"
        for name, value in sorted(vars(args).items())
        if name not in NON_SEMANTIC_FLAGS and value is not None
    ]
    return " ".join([args.command, *flags])


class CliController:
    """Handle depthlab subcommands.

    Each ``cmd_*`` method receives the parsed flags, delegates the work to
    :class:`backend.experiment_helpers.ExperimentHelper` and the model
    functions, prints a short result on stdout and writes CSV output.
    :meth:`dispatch` turns exceptions into exit codes.

    Example
    -------
    >>> from routes.cli_routes import build_parser
    >>> ctrl = CliController()
    >>> args = build_parser(ctrl).parse_args(["depth", "--input", "d.csv", "--point", "0,0"])
    >>> # ctrl.dispatch(args) -> 0 on success
    """

    def __init__(self) -> None:
        self.loader = DatasetLoader()
        self._logger = logging.getLogger(__name__)

    # --- dispatch ------------------------------------------------------------

    def dispatch(self, args: argparse.Namespace) -> int:
        """Run the handler bound to ``args`` and map failures to exit codes."""
        handler: Callable[[argparse.Namespace], None] = args.handler
        try:
            self._logger.info("Command %s started", args.command)
            handler(args)
            self._logger.info("Command %s finished", args.command)
            return EXIT_OK
        except (UsageError, ConfigError) as exc:
            self._logger.error("%s: %s", args.command, exc)
            return EXIT_USAGE
        except DataError as exc:
            self._logger.error("%s: %s", args.command, exc)
            return EXIT_DATA
        except FileNotFoundError as exc:
            self._logger.error("%s: input file not found: %s", args.command, exc.filename)
            return EXIT_DATA
        except Exception:
            self._logger.exception("%s failed unexpectedly", args.command)
            return EXIT_FAILURE

    # --- shared helpers ------------------------------------------------------

    @staticmethod
    def _require_seed(args: argparse.Namespace, reason: str) -> int:
        if args.seed is None:
            raise UsageError(f"--seed is required for {reason}")
        return args.seed

    def _helper(self, args: argparse.Namespace) -> ExperimentHelper:
        return ExperimentHelper(args.seed, canonical_command(args))

    def _load_or_sample(
        self, args: argparse.Namespace
    ) -> tuple[Dataset, LpSymmetricModel | None]:
        """Dataset from ``--input``, else a seeded sample from ``--p/--d/--n``."""
        model = LpSymmetricModel(parse_p(args.p), args.d) if args.p is not None else None
        if args.input is not None:
            return self.loader.read_dataset(args.input), model
        if model is None or args.n is None:
            raise UsageError(f"{args.command} needs --input, or --p and --n to draw a sample")
        seed = self._require_seed(args, "drawing a sample")
        return model.sample(args.n, seed), model

    # --- subcommands ---------------------------------------------------------

    def cmd_depth(self, args: argparse.Namespace) -> None:
        data = self.loader.read_dataset(args.input)
        point = np.asarray(parse_floats(args.point, "--point"))
        method = args.method
        resolved = select_method(data.d, data.n) if method == "auto" else method
        if resolved == APPROX:
            self._require_seed(args, "the approximate method")
        result = halfspace_depth(data, point, method, n_dirs=args.dirs, seed=args.seed or 0)
        print(float(result))
        if args.out:
            self._helper(args).write_table(ExperimentHelper.depth_table(point, result), args.out)

    def cmd_median(self, args: argparse.Namespace) -> None:
        seed = self._require_seed(args, "the median search")
        data = self.loader.read_dataset(args.input)
        result = tukey_median(
            data, seed, rounds=args.rounds, shrink=args.shrink, n_dirs=args.dirs
        )
        print(" ".join(repr(float(v)) for v in result.point), float(result.depth))
        if args.out:
            self._helper(args).write_table(ExperimentHelper.median_table(result), args.out)

    def cmd_symtest(self, args: argparse.Namespace) -> None:
        seed = self._require_seed(args, "the bootstrap test")
        data = self.loader.read_dataset(args.input)
        result = angular_symmetry_test(
            data,
            args.bootstrap,
            args.alpha,
            seed,
            rounds=args.rounds,
            shrink=args.shrink,
            n_dirs=args.dirs,
        )
        print(f"delta_n={result.delta_n} p_value={result.p_value} reject={result.reject}")
        if args.out:
            self._helper(args).write_table(ExperimentHelper.symtest_table(result), args.out)

    def cmd_diagnose(self, args: argparse.Namespace) -> None:
        data, _ = self._load_or_sample(args)
        if args.method == APPROX or (
            args.method == "auto" and select_method(data.d, data.n) == APPROX
        ):
            self._require_seed(args, "the approximate method")
        helper = self._helper(args)
        curve = helper.run_diagnose(data, parse_qgrid(args.qgrid), args.method, args.dirs)
        print(curve.area_deviation)
        if args.out:
            helper.write_table(helper.curve_table(curve), args.out)
        if args.svg:
            helper.write_curve_svg(args.svg, curve)

    def cmd_contours(self, args: argparse.Namespace) -> None:
        if args.d != 2:
            raise UsageError(f"contours are drawn in the plane; --d must be 2, got {args.d}")
        data, model = self._load_or_sample(args)
        levels = parse_floats(args.levels, "--levels")
        if any(not 0.0 < level <= 0.5 for level in levels):
            raise DomainError(f"depth levels must lie in (0, 0.5], got {levels}")
        helper = self._helper(args)
        grid = helper.contour_grid_spec(data, args.grid)
        grid_table, polylines, surfaces = helper.run_contours(data, grid, levels, model)
        helper.write_table(grid_table, args.out)
        helper.write_table(polylines, Path(args.out).with_suffix(".polylines.csv"))
        print(f"{len(grid_table)} grid nodes, {len(polylines)} polyline vertices")
        if args.svg:
            helper.write_contour_svg(args.svg, grid, levels, surfaces, model)

    def cmd_infdim(self, args: argparse.Namespace) -> None:
        self._require_seed(args, "the decay experiment")
        model = SequenceModel(args.profile)
        d_grid = [10**k for k in range(1, 10) if 10**k < args.dmax] + [args.dmax]
        helper = self._helper(args)
        table, summary = helper.run_decay(model, args.draws, d_grid)
        print(summary.to_string(index=False))
        if args.out:
            helper.write_table(table, args.out)

    def cmd_study(self, args: argparse.Namespace) -> None:
        config = StudyConfigLoader().load(args.config, seed=args.seed)
        overrides: dict[str, Any] = {
            "bootstrap": args.bootstrap,
            "replications": args.replications,
            "rounds": args.rounds,
            "shrink": args.shrink,
        }
        config = dataclasses.replace(
            config, **{key: value for key, value in overrides.items() if value is not None}
        )
        args.seed = config.seed
        table = run_study(config, workers=args.workers)
        print(table.to_string(index=False))
        self._helper(args).write_table(table, args.out)
