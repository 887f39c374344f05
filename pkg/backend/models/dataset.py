"""
Value types shared by the depth kernels.

* :class:`Dataset`: validated ``(n, d)`` array of finite observations.
* :class:`DepthResult`: an exact half-space count with its provenance.
* :class:`GridSpec`: rectangular evaluation grid for contour plots.

Validation goes through :func:`sklearn.utils.check_array` so that every
entry point rejects NaN/inf, empty and ragged input the same way.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sklearn.utils import check_array

from backend.exceptions import (
    DimensionMismatchError,
    EmptyInputError,
    GridSpecError,
    NonFiniteValueError,
)

EXACT_1D: str = "exact1d"
EXACT_2D: str = "exact2d"
EXACT_COMBINATORIAL: str = "exactcombinatorial"
APPROX: str = "approx"

EXACT_METHODS: frozenset[str] = frozenset({EXACT_1D, EXACT_2D, EXACT_COMBINATORIAL})


def _validated(values: object, what: str) -> np.ndarray:
    """Return ``values`` as a finite 2-D float array or raise a DataError."""
    try:
        arr = np.asarray(values, dtype=float)
    except ValueError as exc:
        raise DimensionMismatchError(f"{what} rows have unequal length: {exc}") from exc
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    try:
        return check_array(
            arr,
            dtype=np.float64,
            ensure_2d=True,
            ensure_min_samples=1,
            ensure_min_features=1,
            force_all_finite=True,
            copy=True,
            input_name=what,
        )
    except ValueError as exc:
        message = str(exc)
        if "NaN" in message or "infinity" in message:
            raise NonFiniteValueError(f"{what} contains NaN or infinite values") from exc
        if "0 sample(s)" in message or "0 feature(s)" in message:
            raise EmptyInputError(f"{what} is empty") from exc
        raise DimensionMismatchError(f"{what} is not a valid (n, d) array: {message}") from exc


@dataclass(frozen=True, eq=False)
class Dataset:
    """An ordered collection of ``n`` finite points in ``R^d``.

    One-dimensional input is read as ``n`` univariate observations.

    Example
    -------
    >>> data = Dataset.from_points([[1.0, 1.0], [-1.0, -1.0]])
    >>> data.n, data.d
    (2, 2)
    """

    points: np.ndarray

    def __post_init__(self) -> None:
        arr = _validated(self.points, "dataset")
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)

    @classmethod
    def from_points(cls, points: object) -> "Dataset":
        return cls(np.asarray(points, dtype=float))

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def d(self) -> int:
        return int(self.points.shape[1])

    def require_dimension(self, d: int, operation: str) -> None:
        if self.d != d:
            raise DimensionMismatchError(
                f"{operation} needs {d}-dimensional data, got d={self.d}"
            )

    def __len__(self) -> int:
        return self.n


def as_point(x: object, d: int) -> np.ndarray:
    """Return ``x`` as a finite float vector of length ``d``."""
    arr = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if arr.size != d:
        raise DimensionMismatchError(
            f"point has dimension {arr.size} but the dataset has d={d}"
        )
    if not np.isfinite(arr).all():
        raise NonFiniteValueError(f"point {arr.tolist()} is not finite")
    return arr


@dataclass(frozen=True)
class DepthResult:
    """Half-space depth ``count / n`` with method provenance.

    ``count`` is the number of data points in the minimizing closed
    half-space. ``witness_direction`` is a unit normal ``u`` whose closed
    half-space ``{y : <u, y - x> >= 0}`` contains exactly ``count`` points;
    it is ``None`` for the univariate method.
    """

    count: int
    n: int
    method: str
    witness_direction: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.count <= self.n:
            raise ValueError(f"depth count {self.count} outside [0, {self.n}]")

    @property
    def value(self) -> Fraction:
        return Fraction(self.count, self.n)

    @property
    def is_exact(self) -> bool:
        return self.method in EXACT_METHODS

    def __float__(self) -> float:
        return self.count / self.n


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid of ``nx * ny`` nodes over ``[x_min, x_max] x [y_min, y_max]``."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self) -> None:
        if self.nx < 2 or self.ny < 2:
            raise GridSpecError(
                f"grid needs at least 2 nodes per axis, got {self.nx}x{self.ny}"
            )
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise GridSpecError(
                "grid extent is empty: "
                f"x=[{self.x_min}, {self.x_max}], y=[{self.y_min}, {self.y_max}]"
            )

    @classmethod
    def square(cls, half_width: float, nodes: int) -> "GridSpec":
        return cls(-half_width, half_width, -half_width, half_width, nodes, nodes)

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(self.x_min, self.x_max, self.nx),
            np.linspace(self.y_min, self.y_max, self.ny),
        )

    def nodes(self) -> np.ndarray:
        """All nodes as an ``(ny * nx, 2)`` array, row-major (y outer, x inner)."""
        gx, gy = self.axes()
        xx, yy = np.meshgrid(gx, gy)
        return np.column_stack([xx.ravel(), yy.ravel()])
