"""
Experiment helper functions for the depthlab command line.

Provides utility methods for:
- Writing result tables as CSV behind a provenance comment line
- Turning depth, median and test results into flat tables
- Orchestrating the contour, diagnostic and decay experiments
- Rendering the optional SVG figures

This module keeps the controller thin: each controller method parses its
flags, calls one helper method and reports the outcome.
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from backend import __version__
from backend.exceptions import UsageError
from backend.models import (
    Dataset,
    DepthResult,
    GridSpec,
    LpSymmetricModel,
    MedianResult,
    SequenceModel,
    SphericityCurve,
    SymmetryTestResult,
    decay_experiment,
    depth_grid,
    sphericity_curve,
)
from backend.models.sequence_depth import decay_summary
from backend.utils import SvgWriter
from backend.utils.contours import (
    DENSITY,
    DEPTH,
    density_grid,
    density_levels,
    iso_lines,
    polylines_frame,
)
from backend.utils.svg_writer import PALETTE

logger = logging.getLogger(__name__)

GRID_COLUMNS: list[str] = ["gx", "gy", "depth", "density"]
CURVE_COLUMNS: list[str] = ["q", "r", "area_cumulative"]
# Contour grids cover this quantile of the largest absolute coordinate.
GRID_COVERAGE: float = 0.99


class ExperimentHelper:
    """Helper class for CLI commands: provenance, tables and experiment runs."""

    def __init__(self, seed: int | None, command: str) -> None:
        """Record the seed and canonical invocation stamped on every output."""
        self.seed: int | None = seed
        self.command: str = command

    # --- provenance and CSV ------------------------------------------------

    @property
    def provenance(self) -> str:
        return f"depthlab {__version__} seed={self.seed} cmd={self.command}"

    def write_table(self, table: pd.DataFrame, path: str | Path) -> None:
        """Write ``table`` as CSV after a ``#`` provenance line."""
        try:
            with open(path, "w", encoding="utf-8", newline="") as handle:
                handle.write(f"# {self.provenance}\n")
                table.to_csv(handle, index=False, lineterminator="\n")
        except OSError as exc:
            raise UsageError(f"cannot write output {str(path)!r}: {exc}") from exc
        logger.info("Wrote %d rows to %s", len(table), path)

    # --- result tables -----------------------------------------------------

    @staticmethod
    def depth_table(x: np.ndarray, result: DepthResult) -> pd.DataFrame:
        """One row: ``x..., depth, method, witness...``."""
        row: dict[str, object] = {f"x{i}": float(v) for i, v in enumerate(x)}
        row["depth"] = float(result)
        row["method"] = result.method
        if result.witness_direction is not None:
            row.update({f"w{i}": float(v) for i, v in enumerate(result.witness_direction)})
        return pd.DataFrame([row])

    @staticmethod
    def median_table(result: MedianResult) -> pd.DataFrame:
        row: dict[str, object] = {f"m{i}": float(v) for i, v in enumerate(result.point)}
        row.update(
            {
                "depth": float(result.depth),
                "count": result.depth.count,
                "n": result.depth.n,
                "method": result.depth.method,
                "candidates": result.candidates_evaluated,
            }
        )
        return pd.DataFrame([row])

    @staticmethod
    def symtest_table(result: SymmetryTestResult) -> pd.DataFrame:
        row: dict[str, object] = {f"m{i}": float(v) for i, v in enumerate(result.median)}
        row.update(
            {
                "delta_n": result.delta_n,
                "p_value": result.p_value,
                "alpha": result.alpha,
                "reject": int(result.reject),
                "M": result.M,
                "n": result.n,
            }
        )
        return pd.DataFrame([row])

    @staticmethod
    def curve_table(curve: SphericityCurve) -> pd.DataFrame:
        return pd.DataFrame(
            {"q": curve.q_grid, "r": curve.r_values, "area_cumulative": curve.area_cumulative},
            columns=CURVE_COLUMNS,
        )

    # --- experiments -------------------------------------------------------

    def run_diagnose(
        self, data: Dataset, q_grid: np.ndarray, method: str, n_dirs: int
    ) -> SphericityCurve:
        logger.info("Sphericity diagnostic: n=%d, d=%d, %d levels", data.n, data.d, len(q_grid))
        return sphericity_curve(data, q_grid, method=method, n_dirs=n_dirs, seed=self.seed or 0)

    @staticmethod
    def contour_grid_spec(data: Dataset, nodes: int) -> GridSpec:
        """Square grid centred at the origin covering most of the sample."""
        extent = np.quantile(np.max(np.abs(data.points), axis=1), GRID_COVERAGE)
        return GridSpec.square(max(float(extent), 1e-6), nodes)

    def run_contours(
        self,
        data: Dataset,
        grid: GridSpec,
        levels: list[float],
        model: LpSymmetricModel | None,
    ) -> tuple[pd.DataFrame, pd.DataFrame, dict[str, np.ndarray]]:
        """Depth (and density) surfaces on ``grid`` plus their iso-lines.

        Returns the grid table, the polyline table and the raw surfaces.
        """
        logger.info("Contour grid %dx%d over n=%d points", grid.nx, grid.ny, data.n)
        depth = depth_grid(data, grid)
        nodes = grid.nodes()
        surfaces = {DEPTH: depth}
        polylines = [polylines_frame(DEPTH, depth, grid, levels, levels)]
        if model is not None:
            density = density_grid(model, grid)
            surfaces[DENSITY] = density
            polylines.append(
                polylines_frame(DENSITY, density, grid, density_levels(model, levels), levels)
            )
        grid_table = pd.DataFrame(
            {
                "gx": nodes[:, 0],
                "gy": nodes[:, 1],
                "depth": depth.ravel(),
                "density": surfaces[DENSITY].ravel() if model is not None else np.nan,
            },
            columns=GRID_COLUMNS,
        )
        return grid_table, pd.concat(polylines, ignore_index=True), surfaces

    def run_decay(
        self, model: SequenceModel, n_draws: int, d_grid: list[int]
    ) -> tuple[pd.DataFrame, pd.DataFrame]:
        table = decay_experiment(model, n_draws, d_grid, self.seed or 0)
        return table, decay_summary(table)

    # --- figures -----------------------------------------------------------

    def write_contour_svg(
        self,
        path: str | Path,
        grid: GridSpec,
        levels: list[float],
        surfaces: dict[str, np.ndarray],
        model: LpSymmetricModel | None,
    ) -> None:
        """Depth contours as solid lines, matched density contours in grey."""
        svg = SvgWriter((grid.x_min, grid.x_max), (grid.y_min, grid.y_max))
        svg.add_axes("x1", "x2")
        for index, level in enumerate(levels):
            for line in iso_lines(surfaces[DEPTH], grid, level):
                svg.add_polyline(line, stroke=PALETTE[index % len(PALETTE)], stroke_width=1.5)
        if model is not None:
            for level in density_levels(model, levels):
                for line in iso_lines(surfaces[DENSITY], grid, level):
                    svg.add_polyline(line, stroke="#999999")
        svg.write(path)
        logger.info("Wrote contour figure to %s", path)

    def write_curve_svg(self, path: str | Path, curve: SphericityCurve) -> None:
        """r(q) against q with the diagonal for reference."""
        svg = SvgWriter((0.0, 1.0), (0.0, 1.0))
        svg.add_axes("q", "r(q)")
        svg.add_polyline([[0.0, 0.0], [1.0, 1.0]], stroke="#999999")
        svg.add_polyline(np.column_stack([curve.q_grid, curve.r_values]), stroke=PALETTE[0])
        svg.add_label(0.05, 0.95, f"area = {curve.area_deviation:.4f}")
        svg.write(path)
        logger.info("Wrote r(q) figure to %s", path)
