"""
Depth bounds for Gaussian sequences in l_2.

``X = (X_1, X_2, ...)`` has independent centred Gaussian coordinates with
variances ``sigma_i^2`` summing to a finite value. For any coefficients
``alpha`` the one-sided Chebyshev inequality bounds the depth of ``x`` by

    sum(alpha_i^2 sigma_i^2) / (sum(alpha_i x_i))^2

and Cauchy-Schwarz puts the infimum at ``alpha_i = x_i / sigma_i^2``, where
it equals ``1 / sum(x_i^2 / sigma_i^2)``. For a draw from the model each
term of that sum has mean one, so the bound decays like ``1 / d`` with
the truncation length ``d``: almost every point has depth zero.
"""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from backend.exceptions import DomainError, ModelError
from backend.utils.rng_streams import OPTIMAL_ALPHA, SEQUENCE_DRAWS, substream

logger = logging.getLogger(__name__)

INVERSE_SQUARE: str = "inverse_square"
GEOMETRIC: str = "geometric"
CUSTOM: str = "custom"
PROFILES: tuple[str, ...] = (INVERSE_SQUARE, GEOMETRIC)

RATIO_SLACK: float = 1e-10
DECAY_COLUMNS: list[str] = ["draw", "d", "bound"]


@dataclass(frozen=True)
class SequenceModel:
    """Variance profile ``sigma_i^2`` of a Gaussian sequence (``i >= 1``).

    Built-in profiles are ``i^-2`` and ``2^-i``; :meth:`custom` takes an
    explicit list of standard deviations.
    """

    profile: str = INVERSE_SQUARE
    custom_sigma: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.profile == CUSTOM:
            sigma = np.asarray(self.custom_sigma or (), dtype=float)
            if sigma.size == 0:
                raise ModelError("custom sigma profile is empty")
            if not np.all(np.isfinite(sigma)) or np.any(sigma <= 0.0):
                raise ModelError(f"sigma values must be positive and finite, got {sigma.tolist()}")
        elif self.profile not in PROFILES:
            raise ModelError(
                f"unknown sigma profile {self.profile!r}; expected one of {list(PROFILES)}"
            )

    @classmethod
    def custom(cls, sigma: list[float]) -> "SequenceModel":
        return cls(CUSTOM, tuple(float(s) for s in sigma))

    def variances(self, length: int) -> np.ndarray:
        """``sigma_1^2 .. sigma_length^2``."""
        if length < 1:
            raise DomainError(f"truncation length must be >= 1, got {length}")
        index = np.arange(1, length + 1, dtype=float)
        if self.profile == INVERSE_SQUARE:
            variances = index**-2.0
        elif self.profile == GEOMETRIC:
            variances = np.exp2(-index)
        else:
            sigma = np.asarray(self.custom_sigma, dtype=float)
            if sigma.size < length:
                raise ModelError(
                    f"custom sigma profile has {sigma.size} entries, {length} needed"
                )
            variances = sigma[:length] ** 2
        if np.any(variances <= 0.0):
            raise ModelError(f"sigma_i^2 underflows to zero within the first {length} terms")
        return variances

    def sample(self, n_draws: int, length: int, seed: int) -> np.ndarray:
        """``(n_draws, length)`` truncated sequence draws; deterministic given ``seed``."""
        if n_draws < 1:
            raise DomainError(f"n_draws must be >= 1, got {n_draws}")
        sigma = np.sqrt(self.variances(length))
        return substream(seed, SEQUENCE_DRAWS).standard_normal((n_draws, length)) * sigma


def _truncated(model: SequenceModel, x: object, d_trunc: int) -> tuple[np.ndarray, np.ndarray]:
    values = np.asarray(x, dtype=float).ravel()
    if d_trunc < 1:
        raise DomainError(f"d_trunc must be >= 1, got {d_trunc}")
    if values.size < d_trunc:
        raise DomainError(f"x has {values.size} entries but d_trunc={d_trunc}")
    return values[:d_trunc], model.variances(d_trunc)


def mahalanobis_sum(model: SequenceModel, x: object, d_trunc: int) -> float:
    """``sum_{i <= d_trunc} x_i^2 / sigma_i^2``."""
    values, variances = _truncated(model, x, d_trunc)
    return float(np.sum(values**2 / variances))


def depth_upper_bound(
    model: SequenceModel, x: object, d_trunc: int, clip: bool = True
) -> float:
    """``min(1, 1 / sum x_i^2 / sigma_i^2)``; 1 when the truncated ``x`` is zero."""
    total = mahalanobis_sum(model, x, d_trunc)
    if total == 0.0:
        return 1.0
    bound = 1.0 / total
    return min(1.0, bound) if clip else bound


def chebyshev_ratio(model: SequenceModel, alpha: object, x: object) -> float:
    """``sum(alpha_i^2 sigma_i^2) / (sum(alpha_i x_i))^2`` over ``len(alpha)`` terms."""
    coefficients = np.asarray(alpha, dtype=float).ravel()
    values, variances = _truncated(model, x, coefficients.size)
    projection = float(coefficients @ values)
    if projection == 0.0:
        raise DomainError("Chebyshev ratio is undefined when sum(alpha_i x_i) = 0")
    return float(np.sum(coefficients**2 * variances)) / projection**2


def optimal_alpha(model: SequenceModel, x: object, d_trunc: int) -> np.ndarray:
    """The minimizing coefficients ``alpha_i = x_i / sigma_i^2``."""
    values, variances = _truncated(model, x, d_trunc)
    return values / variances


def verify_optimal_alpha(
    model: SequenceModel, x: object, d_trunc: int, n_random_alpha: int, seed: int
) -> bool:
    """True when no seeded random ``alpha`` beats the closed-form bound."""
    if n_random_alpha < 1:
        raise DomainError(f"n_random_alpha must be >= 1, got {n_random_alpha}")
    values, _ = _truncated(model, x, d_trunc)
    if not np.any(values):
        return True
    bound = depth_upper_bound(model, values, d_trunc, clip=False)
    rng = substream(seed, OPTIMAL_ALPHA)
    scale = float(np.linalg.norm(values))
    for _ in range(n_random_alpha):
        alpha = rng.standard_normal(d_trunc)
        while abs(float(alpha @ values)) <= 1e-12 * scale * float(np.linalg.norm(alpha)):
            logger.warning("Resampling a degenerate alpha with sum(alpha_i x_i) = 0")
            alpha = rng.standard_normal(d_trunc)
        if chebyshev_ratio(model, alpha, values) < bound - RATIO_SLACK * max(1.0, bound):
            return False
    return True


def lln_means(model: SequenceModel, draws: np.ndarray, d: int) -> np.ndarray:
    """``(1/d) sum_{i <= d} x_i^2 / sigma_i^2`` for every row of ``draws``."""
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    if draws.shape[1] < d:
        raise DomainError(f"draws have {draws.shape[1]} coordinates, d={d} requested")
    return np.sum(draws[:, :d] ** 2 / model.variances(d), axis=1) / d


def decay_experiment(
    model: SequenceModel, n_draws: int, d_grid: list[int], seed: int
) -> pd.DataFrame:
    """Bound at every truncation in ``d_grid`` for ``n_draws`` model draws.

    Returns a long table with columns ``draw, d, bound`` ordered by draw,
    then by ``d``.
    """
    grid = np.asarray(d_grid, dtype=int)
    if grid.size == 0 or np.any(grid < 1) or np.any(np.diff(grid) <= 0):
        raise DomainError(f"d_grid must be positive and strictly increasing, got {list(d_grid)}")
    length = int(grid[-1])
    draws = model.sample(n_draws, length, seed)
    partial = np.cumsum(draws**2 / model.variances(length), axis=1)[:, grid - 1]
    with np.errstate(divide="ignore"):
        bounds = np.where(partial > 0.0, np.minimum(1.0, 1.0 / partial), 1.0)
    logger.info("Decay experiment: %d draws, truncations %s", n_draws, grid.tolist())
    return pd.DataFrame(
        {
            "draw": np.repeat(np.arange(n_draws), grid.size),
            "d": np.tile(grid, n_draws),
            "bound": bounds.ravel(),
        },
        columns=DECAY_COLUMNS,
    )


def decay_summary(table: pd.DataFrame) -> pd.DataFrame:
    """Median and maximum bound per truncation length."""
    return (
        table.groupby("d")["bound"]
        .agg(median_bound="median", max_bound="max")
        .reset_index()
    )
