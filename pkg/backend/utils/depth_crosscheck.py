"""backend.utils.depth_crosscheck
+------------------------------------------------
Reference bivariate depth by brute force, and a comparison of every exact
method on the same input.

The closed half-plane count, as a function of the normal's angle, only
changes where the boundary line passes through a data point. Evaluating
the count at the midpoint of every arc between consecutive critical angles
therefore visits each distinct value, in O(n^2) time.

Example
-------
>>> from backend.models.dataset import Dataset
>>> square = Dataset.from_points([[1, 1], [1, -1], [-1, 1], [-1, -1]])
>>> DepthCrossCheck().compare(square, [0.0, 0.0])["agree"]
True
"""

import math

import numpy as np

from backend.exceptions import SizeLimitError
from backend.models.dataset import Dataset, as_point
from backend.models.halfspace_depth import depth_2d_exact, depth_exact_combinatorial

_ANGLE_TOLERANCE: float = 1e-9


def brute_force_depth_2d(data: Dataset, x: object) -> int:
    """Minimum closed half-plane count through ``x``, by arc enumeration."""
    data.require_dimension(2, "brute_force_depth_2d")
    offsets = data.points - as_point(x, 2)
    moved = offsets[np.any(offsets != 0.0, axis=1)]
    if moved.shape[0] == 0:
        return data.n

    # normals of the lines through x and each point, both orientations
    base = np.arctan2(moved[:, 0], -moved[:, 1])
    critical = np.unique(np.mod(np.concatenate([base, base + math.pi]), 2.0 * math.pi))
    # rounding splits one line into angles a few ulps apart
    distinct = np.diff(critical, append=critical[0] + 2.0 * math.pi) > _ANGLE_TOLERANCE
    critical = critical[distinct] if distinct.any() else critical[:1]
    following = np.append(critical[1:], critical[0] + 2.0 * math.pi)
    middles = 0.5 * (critical + following)

    normals = np.column_stack([np.cos(middles), np.sin(middles)])
    counts = np.count_nonzero(offsets @ normals.T >= 0.0, axis=0)
    return int(counts.min())


class DepthCrossCheck:
    """Run every exact bivariate method and report whether they agree."""

    def compare(self, data: Dataset, x: object) -> dict[str, object]:
        counts: dict[str, int | None] = {
            "exact2d": depth_2d_exact(data, x).count,
            "brute_force": brute_force_depth_2d(data, x),
        }
        try:
            counts["combinatorial"] = depth_exact_combinatorial(data, x).count
        except SizeLimitError:
            counts["combinatorial"] = None
        available = {v for v in counts.values() if v is not None}
        return {**counts, "n": data.n, "agree": len(available) == 1}
