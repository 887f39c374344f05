"""backend.utils.contours
+------------------------------------------------
Iso-line extraction for depth and density surfaces on a :class:`GridSpec`.

Polylines come from marching squares (``skimage.measure.find_contours``)
and are mapped from array indices back to grid coordinates. Analytic
density contours are matched to depth levels through the axis: the density
contour for depth level ``t`` passes through the axis point whose
population depth is ``t``.
"""

import numpy as np
import pandas as pd
from skimage import measure

from backend.exceptions import DomainError
from backend.models.dataset import GridSpec
from backend.models.lp_symmetric import LpSymmetricModel

DEPTH: str = "depth"
DENSITY: str = "density"
POLYLINE_COLUMNS: list[str] = ["kind", "level", "line", "vertex", "x", "y"]


def iso_lines(values: np.ndarray, grid: GridSpec, level: float) -> list[np.ndarray]:
    """Polylines of ``values == level`` as ``(k, 2)`` arrays of ``(x, y)``."""
    if values.shape != (grid.ny, grid.nx):
        raise DomainError(
            f"surface shape {values.shape} does not match grid {(grid.ny, grid.nx)}"
        )
    dx = (grid.x_max - grid.x_min) / (grid.nx - 1)
    dy = (grid.y_max - grid.y_min) / (grid.ny - 1)
    lines = []
    for path in measure.find_contours(values, level):
        # find_contours yields (row, col) = (y index, x index)
        xs = grid.x_min + path[:, 1] * dx
        ys = grid.y_min + path[:, 0] * dy
        lines.append(np.column_stack([xs, ys]))
    return lines


def density_grid(model: LpSymmetricModel, grid: GridSpec) -> np.ndarray:
    """Model density at every grid node, shaped ``(ny, nx)``."""
    values = np.array([model.density(node) for node in grid.nodes()])
    return values.reshape(grid.ny, grid.nx)


def density_levels(model: LpSymmetricModel, depth_levels: list[float]) -> list[float]:
    """Density value on the contour through the axis point of each depth level."""
    levels = []
    for level in depth_levels:
        point = np.zeros(model.d)
        point[0] = model.axis_quantile(level)
        levels.append(model.density(point))
    return levels


def polylines_frame(
    kind: str, values: np.ndarray, grid: GridSpec, levels: list[float], labels: list[float]
) -> pd.DataFrame:
    """Long table of the iso-lines of ``values``, one row per vertex.

    ``labels`` is the level reported for each entry of ``levels`` (the depth
    level a density contour was matched to, for instance).
    """
    rows: list[dict[str, object]] = []
    for level, label in zip(levels, labels):
        for line_index, line in enumerate(iso_lines(values, grid, level)):
            for vertex, (x, y) in enumerate(line):
                rows.append(
                    {
                        "kind": kind,
                        "level": label,
                        "line": line_index,
                        "vertex": vertex,
                        "x": float(x),
                        "y": float(y),
                    }
                )
    return pd.DataFrame(rows, columns=POLYLINE_COLUMNS)
