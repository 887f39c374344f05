"""
Half-space (Tukey) median search.

The search evaluates the exact depth of a fixed candidate list (every data
point, the coordinatewise median, the mean), then refines the best one by
seeded Gaussian perturbations whose radius starts at the coordinatewise
interquartile range and shrinks geometrically. Only strict improvements
are accepted, so the first best point found wins ties.

The returned depth is certified: it is the exact depth of the returned
point whenever an exact method exists for ``(d, n)``.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from backend.exceptions import DomainError
from backend.utils.rng_streams import MEDIAN_REFINEMENT, substream

from .dataset import APPROX, Dataset, DepthResult
from .halfspace_depth import DEFAULT_APPROX_DIRECTIONS, depth_function

logger = logging.getLogger(__name__)

DEFAULT_REFINEMENT_ROUNDS: int = 200
DEFAULT_SHRINK: float = 0.9


@dataclass(frozen=True)
class MedianResult:
    """Deepest point found, its depth (Δn) and the number of depth evaluations."""

    point: np.ndarray
    depth: DepthResult
    candidates_evaluated: int
    n_dirs: int | None = None

    @property
    def delta(self) -> Fraction:
        return self.depth.value


def refinement_scale(points: np.ndarray) -> np.ndarray:
    """Per-coordinate starting radius: IQR, falling back to the std, else 0."""
    q25, q75 = np.percentile(points, [25.0, 75.0], axis=0)
    scale = q75 - q25
    std = points.std(axis=0)
    return np.where(scale > 0.0, scale, std)


def tukey_median(
    data: Dataset,
    seed: int,
    rounds: int = DEFAULT_REFINEMENT_ROUNDS,
    shrink: float = DEFAULT_SHRINK,
    n_dirs: int = DEFAULT_APPROX_DIRECTIONS,
) -> MedianResult:
    """Return the deepest point found for ``data``; deterministic given ``seed``."""
    if rounds < 0:
        raise DomainError(f"refinement rounds must be >= 0, got {rounds}")
    if not 0.0 < shrink <= 1.0:
        raise DomainError(f"shrink factor must lie in (0, 1], got {shrink}")

    evaluate = depth_function(data, "auto", n_dirs=n_dirs, seed=seed)
    points = data.points
    candidates = np.vstack([points, np.median(points, axis=0), points.mean(axis=0)])

    best_point, best = candidates[0], evaluate(candidates[0])
    for candidate in candidates[1:]:
        result = evaluate(candidate)
        if result.count > best.count:
            best_point, best = candidate, result
    evaluated = candidates.shape[0]

    scale = refinement_scale(points)
    if best.count < data.n and not np.any(scale > 0.0):
        logger.warning("Median refinement skipped: data has zero spread in every coordinate")
        rounds = 0

    rng = substream(seed, MEDIAN_REFINEMENT)
    radius = 1.0
    for _ in range(rounds):
        if best.count == data.n:
            break
        proposal = best_point + radius * scale * rng.standard_normal(data.d)
        result = evaluate(proposal)
        evaluated += 1
        if result.count > best.count:
            best_point, best = proposal, result
        radius *= shrink

    logger.debug(
        "Median search: depth %d/%d after %d evaluations (%s)",
        best.count,
        data.n,
        evaluated,
        best.method,
    )
    return MedianResult(
        point=np.array(best_point),
        depth=best,
        candidates_evaluated=evaluated,
        n_dirs=n_dirs if best.method == APPROX else None,
    )


def max_depth(
    data: Dataset,
    seed: int,
    rounds: int = DEFAULT_REFINEMENT_ROUNDS,
    shrink: float = DEFAULT_SHRINK,
    n_dirs: int = DEFAULT_APPROX_DIRECTIONS,
) -> Fraction:
    """Δn: the depth of the median found by :func:`tukey_median`."""
    return tukey_median(data, seed, rounds=rounds, shrink=shrink, n_dirs=n_dirs).delta
