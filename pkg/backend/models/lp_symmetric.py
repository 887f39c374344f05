"""
l_p-symmetric generalized Gaussian models and their population depth oracles.

A model has density ``C * exp(-||x||_p^p)`` with ``C = (p / (2 Gamma(1/p)))^d``
for finite ``p``; ``p = inf`` is the uniform law on the cube ``[-1, 1]^d``.
Coordinates are independent in both families, so every tail probability
reduces to one-dimensional quadrature or a regularized incomplete gamma.

Oracles
-------
* :meth:`LpSymmetricModel.axis_depth_oracle`: depth of ``(x, 0, ..., 0)``,
  which equals the marginal tail ``P(X_1 >= |x|)``.
* :meth:`LpSymmetricModel.diagonal_depth_oracle`: depth of ``(c, c, 0, ...)``,
  which equals ``P(X_1 + X_2 >= 2c)`` for ``1 <= p < inf``.
* :meth:`LpSymmetricModel.cube_sum_tail`: the same sum tail on the cube,
  by exact area.
* :func:`scaled_sum_discrepancy`: how far ``2^{(1-p)/p} (X_1 + X_2)`` is from
  ``X_1`` in law; zero only at ``p = 2``.

Example
-------
>>> model = LpSymmetricModel(p=2.0, d=1)
>>> round(model.density([0.0]), 4)
0.5642
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import dblquad, quad
from scipy.optimize import brentq
from scipy.special import gamma, gammaincc

from backend.exceptions import DomainError, ModelError
from backend.utils.rng_streams import MODEL_SAMPLE, substream

from .dataset import Dataset, as_point

QUAD_EPSABS: float = 1e-10
QUAD_EPSREL: float = 1e-10
QUAD_LIMIT: int = 200
# exp(-t^p) drops below this beyond the integration cut-off.
TAIL_CUTOFF: float = 1e-12


def parse_p(text: str | float) -> float:
    """Read an exponent such as ``"2"``, ``"0.5"`` or ``"inf"``."""
    try:
        p = float(text)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"exponent p must be a positive number or 'inf', got {text!r}") from exc
    if math.isnan(p) or p <= 0.0:
        raise DomainError(f"exponent p must be positive, got {text!r}")
    return p


@dataclass(frozen=True)
class LpSymmetricModel:
    """Product-form generalized Gaussian law in ``R^d`` (uniform cube for ``p = inf``)."""

    p: float
    d: int = 2

    def __post_init__(self) -> None:
        if math.isnan(self.p) or self.p <= 0.0:
            raise ModelError(f"exponent p must be positive, got {self.p}")
        if self.d < 1:
            raise ModelError(f"dimension must be >= 1, got {self.d}")

    # ------------------------------------------------------------ basics

    @property
    def is_cube(self) -> bool:
        return math.isinf(self.p)

    @property
    def marginal_constant(self) -> float:
        if self.is_cube:
            return 0.5
        return self.p / (2.0 * gamma(1.0 / self.p))

    @property
    def normalization(self) -> float:
        return self.marginal_constant ** self.d

    @property
    def truncation(self) -> float:
        """Half-width beyond which the marginal density is negligible."""
        if self.is_cube:
            return 1.0
        return (-math.log(TAIL_CUTOFF)) ** (1.0 / self.p)

    def marginal_density(self, t: float | np.ndarray) -> float | np.ndarray:
        t = np.abs(np.asarray(t, dtype=float))
        if self.is_cube:
            values = np.where(t <= 1.0, 0.5, 0.0)
        else:
            values = self.marginal_constant * np.exp(-(t ** self.p))
        return values if values.ndim else float(values)

    def density(self, x: object) -> float:
        """Joint density at ``x``."""
        point = as_point(x, self.d)
        if self.is_cube:
            inside = float(np.max(np.abs(point))) <= 1.0
            return self.normalization if inside else 0.0
        return self.normalization * math.exp(-float(np.sum(np.abs(point) ** self.p)))

    def sample(self, n: int, seed: int) -> Dataset:
        """``n`` independent draws; deterministic given ``seed``."""
        if n < 1:
            raise DomainError(f"sample size must be >= 1, got {n}")
        rng = substream(seed, MODEL_SAMPLE)
        if self.is_cube:
            return Dataset(rng.uniform(-1.0, 1.0, size=(n, self.d)))
        radial = rng.gamma(1.0 / self.p, 1.0, size=(n, self.d)) ** (1.0 / self.p)
        signs = 2.0 * rng.integers(0, 2, size=(n, self.d)) - 1.0
        return Dataset(signs * radial)

    # ------------------------------------------------------------ tails and oracles

    def axis_tail(self, x: float | np.ndarray) -> float | np.ndarray:
        """``P(X_1 >= x)``; ``1 - P(X_1 >= |x|)`` for negative ``x``."""
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        if self.is_cube:
            upper = np.clip((1.0 - ax) / 2.0, 0.0, 0.5)
        else:
            upper = gammaincc(1.0 / self.p, ax ** self.p) / 2.0
        values = np.where(x >= 0.0, upper, 1.0 - upper)
        return values if values.ndim else float(values)

    def axis_depth_oracle(self, x: float) -> float:
        """Population depth of the axis point ``(x, 0, ..., 0)``."""
        return float(self.axis_tail(abs(float(x))))

    def axis_quantile(self, level: float) -> float:
        """The ``x >= 0`` with ``axis_tail(x) = level``, for ``0 < level <= 1/2``."""
        if not 0.0 < level <= 0.5:
            raise DomainError(f"depth level must lie in (0, 0.5], got {level}")
        if level == 0.5:
            return 0.0
        if self.is_cube:
            return 1.0 - 2.0 * level
        return brentq(lambda t: self.axis_tail(t) - level, 0.0, self.truncation, xtol=1e-12)

    def diagonal_depth_oracle(self, c: float) -> float:
        """Population depth of ``(c, c, 0, ..., 0)``: ``P(X_1 + X_2 >= 2c)``.

        Conditioning on ``X_1`` turns the planar integral into
        ``int f_1(t) P(X_2 >= 2c - t) dt``.
        """
        if self.is_cube or self.p < 1.0:
            raise DomainError(f"diagonal depth oracle needs 1 <= p < inf, got p={self.p}")
        if self.d < 2:
            raise DomainError("diagonal depth oracle needs d >= 2")
        if c <= 0.0:
            raise DomainError(f"diagonal offset c must be positive, got {c}")
        bound = self.truncation + 2.0 * c
        value, _ = quad(
            lambda t: self.marginal_density(t) * self.axis_tail(2.0 * c - t),
            -bound,
            bound,
            points=[0.0, 2.0 * c],
            epsabs=QUAD_EPSABS,
            epsrel=QUAD_EPSREL,
            limit=QUAD_LIMIT,
        )
        return float(value)

    def cube_sum_tail(self, x: float) -> float:
        """``P(X_1 + X_2 >= 2x)`` on the cube, from the exact triangle area."""
        if not self.is_cube:
            raise DomainError(f"cube_sum_tail needs the p=inf model, got p={self.p}")
        if self.d < 2:
            raise DomainError("cube_sum_tail needs d >= 2")
        exact = Fraction(float(x))
        if exact >= 1:
            return 0.0
        if exact <= -1:
            return 1.0
        if exact >= 0:
            return float((1 - exact) ** 2 / 2)
        return float(1 - (1 + exact) ** 2 / 2)


# ---------------------------------------------------------------- numeric checks


def integrate_density(model: LpSymmetricModel) -> float:
    """Total mass of the density by adaptive quadrature (d <= 2).

    Integrates one orthant and multiplies by ``2^d`` so the kink at the
    origin sits on the integration boundary.
    """
    half = model.truncation
    if model.d == 1:
        mass, _ = quad(
            lambda t: model.density([t]), 0.0, half, epsabs=QUAD_EPSABS, limit=QUAD_LIMIT
        )
        return 2.0 * float(mass)
    if model.d == 2:
        mass, _ = dblquad(
            lambda y, x: model.density([x, y]), 0.0, half, 0.0, half, epsabs=QUAD_EPSABS
        )
        return 4.0 * float(mass)
    raise DomainError(f"integrate_density supports d <= 2, got d={model.d}")


def sum_density(p: float, s: float) -> float:
    """Density of ``X_1 + X_2`` at ``s`` by numeric convolution."""
    marginal = LpSymmetricModel(p, d=1)
    bound = marginal.truncation + abs(s)
    value, _ = quad(
        lambda u: marginal.marginal_density(u) * marginal.marginal_density(s - u),
        -bound,
        bound,
        points=sorted({0.0, float(s)}),
        epsabs=QUAD_EPSABS,
        epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT,
    )
    return float(value)


def scaled_sum_density(p: float, t: float) -> float:
    """Density of ``Y = 2^{(1-p)/p} (X_1 + X_2)`` at ``t``."""
    scale = 2.0 ** ((1.0 - p) / p)
    return sum_density(p, t / scale) / scale


def scaled_sum_discrepancy(p: float, grid: list[float]) -> float:
    """``max_t |f_{X_1}(t) - f_Y(t)|`` over ``grid`` for ``1 <= p < inf``."""
    if math.isinf(p) or p < 1.0:
        raise DomainError(f"discrepancy is defined for 1 <= p < inf, got p={p}")
    if not grid:
        raise DomainError("discrepancy grid is empty")
    marginal = LpSymmetricModel(p, d=1)
    return max(
        abs(float(marginal.marginal_density(t)) - scaled_sum_density(p, float(t)))
        for t in grid
    )


def contour_points(p: float, c: float) -> tuple[np.ndarray, np.ndarray]:
    """Two points on the same l_p contour: ``A = (2^{1/p} c, 0)`` and ``B = (c, c)``."""
    return np.array([2.0 ** (1.0 / p) * c, 0.0]), np.array([c, c])


def lp_unit_contour_point(p: float, t: float, radius: float = 1.0) -> np.ndarray:
    """Point ``radius * (t^{1/p}, (1 - t)^{1/p})`` of the positive quadrant l_p sphere."""
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"contour parameter t must lie in [0, 1], got {t}")
    return radius * np.array([t ** (1.0 / p), (1.0 - t) ** (1.0 / p)])
