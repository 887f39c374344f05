"""
Spherical-symmetry diagnostic built on depth trimming.

For each trimming level ``q`` the ``q``-th central hull is taken to be the
``ceil(q n)`` deepest sample points (ties broken by dataset index). The
smallest ball ``S_q`` enclosing those points is computed, and ``r(q)`` is
the fraction of the whole sample inside ``S_q``. Under spherical symmetry
depth regions are balls, so ``r(q)`` tracks the diagonal; the trapezoid
area between the curve and the diagonal summarizes the deviation.

The raw fractions can dip when a larger hull has a smaller ball in some
direction, so ``r_values`` is their running maximum and ``r_raw`` keeps
the raw values.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from backend.exceptions import DomainError, EmptyInputError
from backend.utils.rng_streams import ENCLOSING_BALL, substream

from .dataset import Dataset
from .halfspace_depth import DEFAULT_APPROX_DIRECTIONS, depth_function

logger = logging.getLogger(__name__)

BALL_TOLERANCE: float = 1e-10


@dataclass(frozen=True)
class SphericityCurve:
    q_grid: np.ndarray
    r_values: np.ndarray
    r_raw: np.ndarray
    area_deviation: float
    area_cumulative: np.ndarray


def depth_counts(
    data: Dataset,
    method: str = "auto",
    n_dirs: int = DEFAULT_APPROX_DIRECTIONS,
    seed: int = 0,
) -> np.ndarray:
    """Depth count of every data point, in dataset order."""
    evaluate = depth_function(data, method, n_dirs=n_dirs, seed=seed)
    return np.array([evaluate(point).count for point in data.points], dtype=np.int64)


def _hull_size(q: float, n: int) -> int:
    if not 0.0 < q < 1.0:
        raise DomainError(f"trimming level q must lie in (0, 1), got {q}")
    return max(1, math.ceil(q * n - 1e-9))


def _depth_order(counts: np.ndarray) -> np.ndarray:
    # deepest first, dataset index breaks ties
    return np.lexsort((np.arange(counts.size), -counts))


def central_hull(
    data: Dataset,
    q: float,
    method: str = "auto",
    n_dirs: int = DEFAULT_APPROX_DIRECTIONS,
    seed: int = 0,
) -> np.ndarray:
    """The ``ceil(q n)`` deepest points of ``data`` as a ``(k, d)`` array."""
    k = _hull_size(q, data.n)
    order = _depth_order(depth_counts(data, method, n_dirs, seed))
    return data.points[order[:k]]


# ---------------------------------------------------------------- enclosing ball


def _circumball(support: list[np.ndarray]) -> tuple[np.ndarray, float]:
    """Smallest ball with every support point on its boundary."""
    base = support[0]
    if len(support) == 1:
        return base.copy(), 0.0
    edges = np.array(support[1:]) - base
    rhs = 0.5 * np.sum(edges * edges, axis=1)
    weights = np.linalg.lstsq(edges @ edges.T, rhs, rcond=None)[0]
    center = base + weights @ edges
    radius2 = max(float(np.sum((p - center) ** 2)) for p in support)
    return center, radius2


def _welzl(
    points: np.ndarray, count: int, boundary: list[np.ndarray], tol: float
) -> tuple[np.ndarray, float]:
    """Smallest ball of ``points[:count]`` with ``boundary`` on its sphere."""
    d = points.shape[1]
    if boundary:
        center, radius2 = _circumball(boundary)
        start = 0
    else:
        center, radius2 = points[0].copy(), 0.0
        start = 1
    if len(boundary) == d + 1:
        return center, radius2
    for i in range(start, count):
        if np.sum((points[i] - center) ** 2) > radius2 + tol:
            center, radius2 = _welzl(points, i, boundary + [points[i]], tol)
    return center, radius2


def smallest_enclosing_ball(points: object, seed: int = 0) -> tuple[np.ndarray, float]:
    """Center and radius of the minimal closed ball containing ``points``.

    Randomized incremental construction; the point order is shuffled with a
    seeded stream so the result is reproducible.
    """
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        raise EmptyInputError("smallest enclosing ball of an empty point set")
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    unique = np.unique(arr, axis=0)
    shuffled = unique[substream(seed, ENCLOSING_BALL).permutation(unique.shape[0])]
    spread = float(np.max(np.sum((shuffled - shuffled.mean(axis=0)) ** 2, axis=1)))
    tol = BALL_TOLERANCE * max(spread, 1.0)
    center, radius2 = _welzl(shuffled, shuffled.shape[0], [], tol)
    return center, math.sqrt(radius2)


# ---------------------------------------------------------------- r(q) curve


def _validate_q_grid(q_grid: object) -> np.ndarray:
    grid = np.asarray(q_grid, dtype=float).ravel()
    if grid.size == 0:
        raise EmptyInputError("q grid is empty")
    if np.any(grid <= 0.0) or np.any(grid >= 1.0):
        raise DomainError(f"q grid values must lie in (0, 1), got {grid.tolist()}")
    if np.any(np.diff(grid) <= 0.0):
        raise DomainError("q grid must be strictly increasing")
    return grid


def sphericity_curve(
    data: Dataset,
    q_grid: object,
    method: str = "auto",
    n_dirs: int = DEFAULT_APPROX_DIRECTIONS,
    seed: int = 0,
) -> SphericityCurve:
    """r(q) over ``q_grid`` and its trapezoid area deviation from the diagonal."""
    grid = _validate_q_grid(q_grid)
    order = _depth_order(depth_counts(data, method, n_dirs, seed))
    r_raw = np.empty(grid.size)
    for j, q in enumerate(grid):
        hull = data.points[order[: _hull_size(q, data.n)]]
        center, radius = smallest_enclosing_ball(hull, seed)
        distance2 = np.sum((data.points - center) ** 2, axis=1)
        inside = distance2 <= radius**2 * (1.0 + BALL_TOLERANCE) + BALL_TOLERANCE
        r_raw[j] = np.count_nonzero(inside) / data.n

    r_values = np.maximum.accumulate(r_raw)
    gap = np.abs(r_values - grid)
    area = float(trapezoid(gap, grid)) if grid.size > 1 else 0.0
    cumulative = (
        cumulative_trapezoid(gap, grid, initial=0.0) if grid.size > 1 else np.zeros(1)
    )
    logger.debug("Sphericity curve over %d levels: area %.6f", grid.size, area)
    return SphericityCurve(
        q_grid=grid,
        r_values=r_values,
        r_raw=r_raw,
        area_deviation=area,
        area_cumulative=cumulative,
    )
