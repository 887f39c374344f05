"""
Empirical Tukey half-space depth of a point with respect to a dataset.

Exact kernels
-------------
* :func:`depth_1d`: closed half-lines, O(n).
* :func:`depth_2d_exact`: angular sweep over the lines through ``x``,
  O(n log n).
* :func:`depth_exact_combinatorial`: enumeration of the vertex rays of
  the central hyperplane arrangement ``{u : <u, y_i> = 0}``, for d <= 4 and
  n <= 60.

Approximation
-------------
* :func:`depth_approx`: minimum over seeded random unit directions.
  Never below the exact depth.

Half-spaces are closed throughout: points on the boundary hyperplane
count, and data points equal to ``x`` count in every half-space. The
minimum over closed half-spaces is attained by a direction with no
non-coincident point on its boundary, which is what all exact kernels
search over.

Example
-------
>>> from backend.models.dataset import Dataset
>>> square = Dataset.from_points([[1, 1], [1, -1], [-1, 1], [-1, -1]])
>>> depth_2d_exact(square, [0.0, 0.0]).value
Fraction(1, 2)
"""

import itertools
import math
from typing import Callable

import numpy as np
from scipy.linalg import null_space

from backend.exceptions import DomainError, SizeLimitError
from backend.utils.rng_streams import APPROX_DIRECTIONS, substream

from .dataset import (
    APPROX,
    EXACT_1D,
    EXACT_2D,
    EXACT_COMBINATORIAL,
    Dataset,
    DepthResult,
    GridSpec,
    as_point,
)

EXACT_MAX_DIMENSION: int = 4
EXACT_MAX_POINTS: int = 60
DEFAULT_APPROX_DIRECTIONS: int = 1000

METHOD_ALIASES: dict[str, str] = {
    "exact1d": EXACT_1D,
    "exact2d": EXACT_2D,
    "combinatorial": EXACT_COMBINATORIAL,
    "exactcombinatorial": EXACT_COMBINATORIAL,
    "approx": APPROX,
}

# Relative tolerance for "y lies on the hyperplane u^perp".
_TIE_TOLERANCE: float = 1e-9
# Relative tolerance below which d-1 points are treated as dependent.
_RANK_TOLERANCE: float = 1e-12
_DIRECTION_CHUNK: int = 512


def _split_coincident(data: Dataset, centre: np.ndarray) -> tuple[int, np.ndarray]:
    """Return (#points equal to centre, offsets of the remaining points)."""
    offsets = data.points - centre
    coincident = np.all(offsets == 0.0, axis=1)
    return int(np.count_nonzero(coincident)), offsets[~coincident]


def _unit(k: int) -> np.ndarray:
    e = np.zeros(k)
    e[0] = 1.0
    return e


# ---------------------------------------------------------------- 1-D


def depth_1d(data: Dataset, x: float) -> DepthResult:
    """Depth ``min(#{x_i <= x}, #{x_i >= x}) / n`` of a univariate sample."""
    data.require_dimension(1, "depth_1d")
    xv = float(as_point(x, 1)[0])
    values = data.points[:, 0]
    below = int(np.count_nonzero(values <= xv))
    above = int(np.count_nonzero(values >= xv))
    return DepthResult(min(below, above), data.n, EXACT_1D)


# ---------------------------------------------------------------- 2-D sweep


def _fold_rotation(offsets: np.ndarray) -> float:
    """Angle in the middle of the widest gap between the lines through the origin.

    Folding after a rotation by this angle keeps every line away from the
    fold, so offsets on one line never land on both ends of [0, pi).
    """
    folded = np.sort(np.mod(np.arctan2(offsets[:, 1], offsets[:, 0]), math.pi))
    gaps = np.append(np.diff(folded), folded[0] + math.pi - folded[-1])
    widest = int(np.argmax(gaps))
    return float(folded[widest] + 0.5 * gaps[widest])


def _sweep_2d(offsets: np.ndarray) -> tuple[int, np.ndarray]:
    """Minimum open half-plane count over boundary lines through the origin.

    Each offset is folded onto its line through the origin (angle in
    [0, pi)); offsets on the same line, up to ``_TIE_TOLERANCE``, form one
    event and are processed together. ``left`` tracks how many offsets lie
    strictly to the left of a boundary direction ``beta`` as it sweeps
    through [0, pi).
    """
    m = offsets.shape[0]
    phi = _fold_rotation(offsets)
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)
    rotated = np.column_stack(
        [
            offsets[:, 0] * cos_phi + offsets[:, 1] * sin_phi,
            offsets[:, 1] * cos_phi - offsets[:, 0] * sin_phi,
        ]
    )

    flipped = rotated[:, 1] < 0.0
    lines = np.where(flipped[:, None], -rotated, rotated)
    angles = np.arctan2(lines[:, 1], lines[:, 0])

    order = np.argsort(angles, kind="stable")
    lines, angles, flipped = lines[order], angles[order], flipped[order]

    lengths = np.linalg.norm(lines, axis=1)
    cross = lines[1:, 0] * lines[:-1, 1] - lines[1:, 1] * lines[:-1, 0]
    tied = np.abs(cross) <= _TIE_TOLERANCE * lengths[1:] * lengths[:-1]
    starts = np.concatenate(([True], ~tied))
    group = np.cumsum(starts) - 1
    n_groups = int(group[-1]) + 1

    # Crossing a line moves its unflipped offsets to the right side and its
    # flipped (antipodal) offsets to the left side.
    leaving = np.bincount(group, weights=(~flipped).astype(float), minlength=n_groups)
    entering = np.bincount(group, weights=flipped.astype(float), minlength=n_groups)
    left0 = int(np.count_nonzero(~flipped))
    left = left0 - np.concatenate(([0.0], np.cumsum(leaving - entering)))
    left = np.rint(left).astype(np.int64)
    smaller = np.minimum(left, m - left)

    gap = int(np.argmin(smaller))
    event_angles = angles[starts]
    lo = event_angles[gap - 1] if gap > 0 else event_angles[-1] - math.pi
    hi = event_angles[gap] if gap < n_groups else event_angles[0] + math.pi
    beta = 0.5 * (lo + hi) + phi
    normal = np.array([-math.sin(beta), math.cos(beta)])
    if left[gap] > m - left[gap]:
        normal = -normal
    return int(smaller[gap]), normal


def depth_2d_exact(data: Dataset, x: object) -> DepthResult:
    """Exact bivariate depth by an O(n log n) angular sweep."""
    data.require_dimension(2, "depth_2d_exact")
    centre = as_point(x, 2)
    n_coincident, offsets = _split_coincident(data, centre)
    if offsets.shape[0] == 0:
        return DepthResult(data.n, data.n, EXACT_2D, _unit(2))
    count, witness = _sweep_2d(offsets)
    return DepthResult(n_coincident + count, data.n, EXACT_2D, witness)


# ---------------------------------------------------------------- general d


def _subset_normals(blocks: np.ndarray) -> np.ndarray:
    """Generalized cross products of stacked ``(k-1, k)`` row blocks."""
    n_blocks, _, k = blocks.shape
    normals = np.empty((n_blocks, k))
    for j in range(k):
        minor = np.delete(blocks, j, axis=2)
        normals[:, j] = (-1.0) ** j * np.linalg.det(minor)
    return normals


def _min_open_count(vectors: np.ndarray) -> tuple[int, np.ndarray]:
    """Minimum over generic unit ``u`` of ``#{i : <u, y_i> > 0}``, with a witness.

    ``vectors`` are nonzero rows in ``R^k``. The optimum is attained next to
    a vertex ray of the arrangement, i.e. a normal ``w`` of some k-1
    independent rows; rows tied on ``w^perp`` are resolved by recursing
    inside ``w^perp``.
    """
    m, k = vectors.shape
    if m == 0:
        return 0, _unit(k)
    if k == 1:
        positive = int(np.count_nonzero(vectors[:, 0] > 0.0))
        negative = m - positive
        if positive <= negative:
            return positive, np.array([1.0])
        return negative, np.array([-1.0])

    rank = int(np.linalg.matrix_rank(vectors))
    if rank < k:
        _, _, vt = np.linalg.svd(vectors, full_matrices=False)
        basis = vt[:rank].T
        count, inner = _min_open_count(vectors @ basis)
        return count, basis @ inner

    lengths = np.linalg.norm(vectors, axis=1)
    subsets = np.array(list(itertools.combinations(range(m), k - 1)), dtype=np.intp)
    normals = _subset_normals(vectors[subsets])
    norms = np.linalg.norm(normals, axis=1)
    usable = norms > _RANK_TOLERANCE * np.prod(lengths[subsets], axis=1)
    normals = normals[usable] / norms[usable, None]

    dots = normals @ vectors.T
    tolerance = _TIE_TOLERANCE * lengths
    ties = np.abs(dots) <= tolerance
    above = np.count_nonzero(dots > tolerance, axis=1)
    below = np.count_nonzero(dots < -tolerance, axis=1)
    n_ties = np.count_nonzero(ties, axis=1)
    sides = np.minimum(above, below)

    best_count, best = m + 1, -1
    for s in np.argsort(sides, kind="stable"):
        lower = int(sides[s])
        if lower >= best_count:
            break
        # k-1 independent tied rows can always be pushed to the far side.
        extra = 0 if n_ties[s] == k - 1 else _tied_count(vectors[ties[s]], normals[s])
        if lower + extra < best_count:
            best_count, best = lower + extra, int(s)

    w = normals[best] if above[best] <= below[best] else -normals[best]
    basis = null_space(w[None, :])
    _, inner = _min_open_count(vectors[ties[best]] @ basis)
    push = basis @ inner
    free = ~ties[best]
    eps = 0.5 * float(np.min(np.abs(dots[best, free]) / lengths[free])) if free.any() else 1.0
    u = w + eps * push
    return best_count, u / np.linalg.norm(u)


def _tied_count(tied: np.ndarray, normal: np.ndarray) -> int:
    basis = null_space(normal[None, :])
    return _min_open_count(tied @ basis)[0]


def depth_exact_combinatorial(data: Dataset, x: object) -> DepthResult:
    """Exact depth in dimensions 1..4 for at most 60 points."""
    if data.d > EXACT_MAX_DIMENSION or data.n > EXACT_MAX_POINTS:
        raise SizeLimitError(
            f"exact combinatorial depth supports d <= {EXACT_MAX_DIMENSION} and "
            f"n <= {EXACT_MAX_POINTS}, got d={data.d}, n={data.n}"
        )
    centre = as_point(x, data.d)
    n_coincident, offsets = _split_coincident(data, centre)
    if offsets.shape[0] == 0:
        return DepthResult(data.n, data.n, EXACT_COMBINATORIAL, _unit(data.d))
    count, witness = _min_open_count(offsets)
    return DepthResult(n_coincident + count, data.n, EXACT_COMBINATORIAL, witness)


# ---------------------------------------------------------------- approximation


def random_directions(d: int, n_dirs: int, seed: int) -> np.ndarray:
    """``n_dirs`` seeded unit vectors, uniform on the sphere in ``R^d``.

    For a fixed seed, the first k rows do not depend on ``n_dirs``.
    """
    if n_dirs < 1:
        raise DomainError(f"n_dirs must be a positive integer, got {n_dirs}")
    gaussian = substream(seed, APPROX_DIRECTIONS).standard_normal((n_dirs, d))
    return gaussian / np.linalg.norm(gaussian, axis=1, keepdims=True)


def depth_along_directions(data: Dataset, x: object, directions: np.ndarray) -> DepthResult:
    """Minimum closed half-space count over the given unit normals."""
    centre = as_point(x, data.d)
    offsets = data.points - centre
    best_count, best_direction = data.n + 1, directions[0]
    for start in range(0, directions.shape[0], _DIRECTION_CHUNK):
        block = directions[start:start + _DIRECTION_CHUNK]
        counts = np.count_nonzero(offsets @ block.T >= 0.0, axis=0)
        j = int(np.argmin(counts))
        if counts[j] < best_count:
            best_count, best_direction = int(counts[j]), block[j]
    return DepthResult(best_count, data.n, APPROX, np.array(best_direction))


def depth_approx(
    data: Dataset, x: object, n_dirs: int = DEFAULT_APPROX_DIRECTIONS, seed: int = 0
) -> DepthResult:
    """Random-direction upper bound on the depth; deterministic given ``seed``."""
    return depth_along_directions(data, x, random_directions(data.d, n_dirs, seed))


# ---------------------------------------------------------------- dispatch


def select_method(d: int, n: int) -> str:
    """The exact method available for ``(d, n)``, else the approximation."""
    if d == 1:
        return EXACT_1D
    if d == 2:
        return EXACT_2D
    if d <= EXACT_MAX_DIMENSION and n <= EXACT_MAX_POINTS:
        return EXACT_COMBINATORIAL
    return APPROX


def depth_function(
    data: Dataset,
    method: str = "auto",
    n_dirs: int = DEFAULT_APPROX_DIRECTIONS,
    seed: int = 0,
) -> Callable[[object], DepthResult]:
    """Return ``x -> DepthResult`` for a fixed dataset and method.

    The approximate evaluator draws its directions once, so every point is
    compared over the same direction set.
    """
    resolved = select_method(data.d, data.n) if method == "auto" else METHOD_ALIASES.get(method)
    if resolved is None:
        raise DomainError(
            f"unknown depth method {method!r}; expected one of {sorted(METHOD_ALIASES)}"
        )
    if resolved == EXACT_1D:
        return lambda x: depth_1d(data, x)
    if resolved == EXACT_2D:
        return lambda x: depth_2d_exact(data, x)
    if resolved == EXACT_COMBINATORIAL:
        return lambda x: depth_exact_combinatorial(data, x)
    directions = random_directions(data.d, n_dirs, seed)
    return lambda x: depth_along_directions(data, x, directions)


def halfspace_depth(
    data: Dataset,
    x: object,
    method: str = "auto",
    n_dirs: int = DEFAULT_APPROX_DIRECTIONS,
    seed: int = 0,
) -> DepthResult:
    """Depth of ``x`` by the named method (``"auto"`` picks the best exact one)."""
    return depth_function(data, method, n_dirs, seed)(x)


def depth_grid(data: Dataset, grid: GridSpec) -> np.ndarray:
    """Exact bivariate depth at every grid node as an ``(ny, nx)`` array."""
    data.require_dimension(2, "depth_grid")
    nodes = grid.nodes()
    values = np.fromiter(
        (float(depth_2d_exact(data, node)) for node in nodes),
        dtype=float,
        count=nodes.shape[0],
    )
    return values.reshape(grid.ny, grid.nx)
