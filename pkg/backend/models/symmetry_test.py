"""
Bootstrap test of angular symmetry and the Monte Carlo study around it.

Under angular symmetry about its median, a distribution's median has
depth 1/2. The test compares the sample's maximal depth Δn with the maximal
depths of M sign-flip bootstrap samples ``z_i (x_i - m) + m`` (``z_i`` uniform
on {-1, +1}), which are angularly symmetric by construction, and rejects
when Δn sits in the lower alpha tail:

    p = #{m : Δ*_m <= Δn} / M,   reject  <=>  p < alpha

Both Δn and every Δ*_m come from :func:`tukey_median` with the same seed,
so they share the search's bias.

Simulation laws
---------------
``D6`` is the uniform law on the solid unit simplex. ``D1s``-``D5s`` are
stand-ins: the first three are angularly symmetric about the origin, the
last two are not. ``lp:p=<p>`` selects an :class:`LpSymmetricModel`.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from backend.exceptions import ConfigError, DomainError, InsufficientDataError
from backend.utils.rng_streams import (
    BOOTSTRAP_SIGNS,
    STUDY_DATA,
    STUDY_TEST,
    derive_seed,
    substream,
)

from .dataset import Dataset
from .halfspace_depth import DEFAULT_APPROX_DIRECTIONS
from .lp_symmetric import LpSymmetricModel, parse_p
from .tukey_median import DEFAULT_REFINEMENT_ROUNDS, DEFAULT_SHRINK, tukey_median

logger = logging.getLogger(__name__)

SYMMETRIC_STAND_INS: tuple[str, ...] = ("D1s", "D2s", "D3s")
ASYMMETRIC_STAND_INS: tuple[str, ...] = ("D4s", "D5s")
SIMPLEX: str = "D6"
DISTRIBUTION_IDS: tuple[str, ...] = SYMMETRIC_STAND_INS + ASYMMETRIC_STAND_INS + (SIMPLEX,)
LP_PREFIX: str = "lp:p="

STUDY_COLUMNS: list[str] = ["dist", "d", "n", "alpha", "rate", "R", "M", "seed"]


@dataclass(frozen=True)
class SymmetryTestResult:
    """Outcome of one bootstrap test."""

    median: np.ndarray
    delta_n: float
    bootstrap_deltas: np.ndarray
    p_value: float
    alpha: float
    reject: bool
    n: int = field(default=0)

    @property
    def M(self) -> int:
        return int(self.bootstrap_deltas.size)


@dataclass(frozen=True)
class StudyConfig:
    """One rejection-rate study: every (distribution, d, n, alpha) cell."""

    distributions: tuple[str, ...]
    dims: tuple[int, ...]
    sizes: tuple[int, ...]
    bootstrap: int
    alphas: tuple[float, ...]
    replications: int
    seed: int
    rounds: int = DEFAULT_REFINEMENT_ROUNDS
    shrink: float = DEFAULT_SHRINK

    def __post_init__(self) -> None:
        if not (self.distributions and self.dims and self.sizes and self.alphas):
            raise ConfigError("study needs at least one distribution, d, n and alpha")
        for dist in self.distributions:
            validate_distribution_id(dist)
        if any(d < 1 for d in self.dims):
            raise ConfigError(f"dimensions must be positive, got {self.dims}")
        if any(n < 2 for n in self.sizes):
            raise ConfigError(f"sample sizes must be >= 2, got {self.sizes}")
        if self.bootstrap < 1 or self.replications < 1:
            raise ConfigError(
                f"bootstrap and replications must be positive, got "
                f"M={self.bootstrap}, R={self.replications}"
            )
        if any(not 0.0 < a < 1.0 for a in self.alphas):
            raise ConfigError(f"alpha values must lie in (0, 1), got {self.alphas}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")


# ---------------------------------------------------------------- sampling


def validate_distribution_id(dist: str) -> None:
    if dist in DISTRIBUTION_IDS:
        return
    if dist.startswith(LP_PREFIX):
        try:
            parse_p(dist[len(LP_PREFIX):])
            return
        except DomainError as exc:
            raise ConfigError(f"bad l_p distribution id {dist!r}: {exc}") from exc
    raise ConfigError(
        f"unknown distribution id {dist!r}; expected one of {list(DISTRIBUTION_IDS)} "
        f"or '{LP_PREFIX}<p>'"
    )


def _uniform_simplex(rng: np.random.Generator, d: int, n: int) -> np.ndarray:
    # Normalized exponential spacings are uniform on the face sum(x) = 1;
    # a Beta(d, 1) radius spreads them over the solid simplex.
    spacings = rng.exponential(size=(n, d))
    face = spacings / spacings.sum(axis=1, keepdims=True)
    radius = rng.beta(d, 1.0, size=(n, 1))
    return radius * face


def sample_distribution(dist: str, d: int, n: int, seed: int) -> Dataset:
    """Draw ``n`` points in ``R^d`` from a simulation law; deterministic given ``seed``."""
    validate_distribution_id(dist)
    if d < 1 or n < 1:
        raise DomainError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
    if dist.startswith(LP_PREFIX):
        return LpSymmetricModel(parse_p(dist[len(LP_PREFIX):]), d).sample(n, seed)

    rng = substream(seed, STUDY_DATA)
    if dist == "D1s":
        points = rng.standard_normal((n, d))
    elif dist == "D2s":
        # spherical t with 3 degrees of freedom
        chi2 = rng.chisquare(3.0, size=(n, 1))
        points = rng.standard_normal((n, d)) / np.sqrt(chi2 / 3.0)
    elif dist == "D3s":
        wide = rng.random(n) < 0.5
        points = rng.standard_normal((n, d))
        points[wide, 0] *= 3.0
    elif dist == "D4s":
        shifted = rng.random(n) < 0.25
        points = rng.standard_normal((n, d))
        points[shifted] += 3.0 / math.sqrt(d)
    elif dist == "D5s":
        points = rng.standard_normal((n, d))
        # Exp(1) recentred at its median
        points[:, -1] = rng.exponential(size=n) - math.log(2.0)
    else:
        points = _uniform_simplex(rng, d, n)
    return Dataset(points)


# ---------------------------------------------------------------- the test


def sign_flip(points: np.ndarray, center: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """Reflect each point through ``center`` where its sign is -1."""
    signs = np.asarray(signs, dtype=float).reshape(-1, 1)
    return signs * (points - center) + center


def angular_symmetry_test(
    data: Dataset,
    M: int,
    alpha: float,
    seed: int,
    rounds: int = DEFAULT_REFINEMENT_ROUNDS,
    shrink: float = DEFAULT_SHRINK,
    n_dirs: int = DEFAULT_APPROX_DIRECTIONS,
    forced_signs: np.ndarray | None = None,
) -> SymmetryTestResult:
    """Run the sign-flip bootstrap test on ``data``.

    ``forced_signs`` replaces the random sign draws: an ``(n,)`` vector is
    used for every replicate, an ``(M, n)`` array row by row.
    """
    if data.n < 2:
        raise InsufficientDataError(f"symmetry test needs n >= 2, got n={data.n}")
    if M < 1:
        raise DomainError(f"bootstrap count M must be >= 1, got {M}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if forced_signs is not None:
        forced_signs = np.broadcast_to(np.asarray(forced_signs, dtype=float), (M, data.n))

    search = {"rounds": rounds, "shrink": shrink, "n_dirs": n_dirs}
    median = tukey_median(data, seed, **search)
    delta_n = median.depth.count

    counts = np.empty(M, dtype=np.int64)
    for m in range(M):
        if forced_signs is None:
            signs = 2 * substream(seed, BOOTSTRAP_SIGNS, m).integers(0, 2, size=data.n) - 1
        else:
            signs = forced_signs[m]
        replicate = Dataset(sign_flip(data.points, median.point, signs))
        counts[m] = tukey_median(replicate, seed, **search).depth.count

    # counts share the denominator n, so the comparison is exact
    p_value = int(np.count_nonzero(counts <= delta_n)) / M
    return SymmetryTestResult(
        median=median.point,
        delta_n=delta_n / data.n,
        bootstrap_deltas=counts / data.n,
        p_value=p_value,
        alpha=alpha,
        reject=p_value < alpha,
        n=data.n,
    )


# ---------------------------------------------------------------- study


@dataclass(frozen=True)
class _Replication:
    dist: str
    d: int
    n: int
    bootstrap: int
    data_seed: int
    test_seed: int
    rounds: int
    shrink: float


def _replication_p_value(task: _Replication) -> float:
    data = sample_distribution(task.dist, task.d, task.n, task.data_seed)
    # alpha does not affect the p-value
    result = angular_symmetry_test(
        data, task.bootstrap, 0.5, task.test_seed, rounds=task.rounds, shrink=task.shrink
    )
    return result.p_value


def _replications(
    config: StudyConfig, dist_index: int, dist: str, d: int, n: int
) -> list[_Replication]:
    return [
        _Replication(
            dist=dist,
            d=d,
            n=n,
            bootstrap=config.bootstrap,
            data_seed=derive_seed(config.seed, STUDY_DATA, dist_index, d, n, r),
            test_seed=derive_seed(config.seed, STUDY_TEST, dist_index, d, n, r),
            rounds=config.rounds,
            shrink=config.shrink,
        )
        for r in range(config.replications)
    ]


def run_study(config: StudyConfig, workers: int = 1) -> pd.DataFrame:
    """Rejection rate of every (distribution, d, n, alpha) cell.

    Replications may run in ``workers`` processes; results are merged in
    replication order, so the table does not depend on ``workers``.
    """
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")
    rows: list[dict[str, object]] = []
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for dist_index, dist in enumerate(config.distributions):
            for d in config.dims:
                for n in config.sizes:
                    logger.info(
                        "Study cell dist=%s d=%d n=%d: %d replications, M=%d",
                        dist,
                        d,
                        n,
                        config.replications,
                        config.bootstrap,
                    )
                    tasks = _replications(config, dist_index, dist, d, n)
                    if executor is None:
                        p_values = [_replication_p_value(task) for task in tasks]
                    else:
                        p_values = list(executor.map(_replication_p_value, tasks))
                    p_values = np.asarray(p_values)
                    for alpha in config.alphas:
                        rate = float(np.count_nonzero(p_values < alpha)) / config.replications
                        rows.append(
                            {
                                "dist": dist,
                                "d": d,
                                "n": n,
                                "alpha": alpha,
                                "rate": rate,
                                "R": config.replications,
                                "M": config.bootstrap,
                                "seed": config.seed,
                            }
                        )
                    logger.info("Study cell dist=%s d=%d n=%d done", dist, d, n)
    finally:
        if executor is not None:
            executor.shutdown()
    return pd.DataFrame(rows, columns=STUDY_COLUMNS)
